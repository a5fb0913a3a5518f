"""Decidable sets of primes or of points of P^1.

A set is stored as ``tail`` (all enumerated labels with index >= tail),
``rest`` (every unenumerated label), plus finitely many explicit additions
and removals.  This family contains Finite, Cofinite, All and TailUnion and
is closed under the Boolean operations.
"""
from __future__ import annotations

from dataclasses import dataclass

from .fields import PrimeUniverse


@dataclass(frozen=True)
class LabelSet:
    universe: object
    tail: int | None = None
    rest: bool = False
    plus: frozenset = frozenset()
    minus: frozenset = frozenset()

    # --- construction -----------------------------------------------
    def __post_init__(self):
        u = self.universe
        rest = self.rest and u.unenumerated_cardinality is not None
        tail = self.tail
        n = u.enumerated_count
        if tail is not None:
            tail = max(tail, 0)
            if n is not None and tail >= n:
                tail = None
        plus = set(self.plus)
        minus = set(self.minus)
        for x in plus | minus:
            u.check(x)

        def covered(x, tail=tail):
            i = u.index(x)
            if i is None:
                return rest
            return tail is not None and i >= tail

        plus = {x for x in plus if not covered(x)}
        minus = {x for x in minus if covered(x)}
        if tail is not None:
            while tail > 0 and u.at(tail - 1) in plus:
                tail -= 1
                plus.discard(u.at(tail))
            while tail is not None and u.at(tail) in minus:
                minus.discard(u.at(tail))
                tail += 1
                if n is not None and tail >= n:
                    tail = None
        # canonical form: enumerated exclusions sit below the tail as gaps in plus
        gaps = {x for x in minus if u.index(x) is not None}
        if gaps:
            top = max(u.index(x) for x in gaps) + 1
            plus |= {u.at(i) for i in range(tail, top)} - gaps
            minus -= gaps
            tail = top if n is None or top < n else None
        object.__setattr__(self, "tail", tail)
        object.__setattr__(self, "rest", rest)
        object.__setattr__(self, "plus", frozenset(plus))
        object.__setattr__(self, "minus", frozenset(minus))

    # --- queries -------------------------------------------------------
    def _covered(self, x):
        i = self.universe.index(x)
        if i is None:
            return self.rest
        return self.tail is not None and i >= self.tail

    def __contains__(self, x):
        return x in self.plus or (self._covered(x) and x not in self.minus)

    def is_empty(self):
        return self.tail is None and not self.rest and not self.plus

    def is_all(self):
        return self.complement().is_empty()

    @property
    def has_tail(self):
        """True iff the set contains every enumerated label from some index on."""
        return self.tail is not None

    def cardinality(self):
        """'finite', 'countable' or 'uncountable'."""
        if self.rest:
            return self.universe.unenumerated_cardinality
        if self.tail is not None and self.universe.enumerated_count is None:
            return "countable"
        return "finite"

    def is_finite(self):
        return self.cardinality() == "finite"

    def elements(self):
        """Explicit members of a finite set, sorted."""
        if not self.is_finite():
            raise ValueError("set is infinite")
        out = set(self.plus)
        if self.tail is not None:
            out |= {self.universe.at(i) for i in range(self.tail, self.universe.enumerated_count)}
        out -= self.minus
        return sorted(out, key=self.universe.sort_key)

    def _horizon(self):
        idx = [self.universe.index(x) for x in self.plus | self.minus]
        idx = [i for i in idx if i is not None]
        return max([self.tail or 0] + [i + 1 for i in idx])

    # --- Boolean algebra --------------------------------------------
    def _combine(self, other, op):
        if self.universe != other.universe:
            raise ValueError("label sets over different universes")
        u = self.universe
        horizon = max(self._horizon(), other._horizon())
        tail_member = op(self.tail is not None, other.tail is not None)
        rest = op(self.rest, other.rest)
        plus, minus = set(), set()
        n = u.enumerated_count
        for i in range(horizon if n is None else min(horizon, n)):
            x = u.at(i)
            if op(x in self, x in other):
                plus.add(x)
        for x in self.plus | self.minus | other.plus | other.minus:
            if u.index(x) is None:
                if op(x in self, x in other):
                    plus.add(x)
                else:
                    minus.add(x)
        return LabelSet(u, horizon if tail_member else None, rest, frozenset(plus), frozenset(minus))

    def __or__(self, other):
        return self._combine(other, lambda a, b: a or b)

    def __and__(self, other):
        return self._combine(other, lambda a, b: a and b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a and not b)

    def complement(self):
        return self._combine(empty(self.universe), lambda a, b: not a)

    def issubset(self, other):
        return (self - other).is_empty()

    def __le__(self, other):
        return self.issubset(other)

    # --- display ---------------------------------------------------------
    def variant(self):
        if self.tail is None and not self.rest:
            return "Finite"
        if self.is_all():
            return "All"
        if (self.plus or self.rest) and self.complement().is_finite():
            return "Cofinite"
        if not self.rest and not self.minus:
            return "TailUnion"
        return "Mixed"

    def __str__(self):
        u = self.universe
        fmt = lambda xs: "{" + ", ".join(u.fmt(x) for x in sorted(xs, key=u.sort_key)) + "}"
        v = self.variant()
        if v == "Finite":
            return fmt(self.plus)
        if v == "All":
            return "all"
        if v == "Cofinite":
            return "all except " + fmt(self.complement().elements())
        parts = []
        if self.plus:
            parts.append(fmt(self.plus))
        if self.tail is not None:
            parts.append("{" + _tail_text(u, self.tail) + "}")
        if self.rest:
            parts.append("{unenumerated}")
        s = " + ".join(parts) if parts else "{}"
        if self.minus:
            s += " except " + fmt(self.minus)
        return s

    __repr__ = __str__


def _tail_text(u, tail):
    if isinstance(u, PrimeUniverse):
        return f"p >= {u.at(tail)}"
    return f"index >= {tail}"


# --- named constructors -------------------------------------------------

def empty(universe):
    return LabelSet(universe)


def finite(universe, elems):
    return LabelSet(universe, plus=frozenset(elems))


def cofinite(universe, elems=()):
    return LabelSet(universe, tail=0, rest=True, minus=frozenset(elems))


def everything(universe):
    return LabelSet(universe, tail=0, rest=True)


def tail_union(universe, elems, bound_index):
    """``elems`` together with every enumerated label of index >= bound_index."""
    return LabelSet(universe, tail=bound_index, plus=frozenset(elems))


PRIMES = PrimeUniverse()


def primes(elems=()):
    return finite(PRIMES, elems)


def primes_from(value, elems=()):
    """``elems`` together with all primes p >= value."""
    return tail_union(PRIMES, elems, PRIMES.index_of_bound(value))


def all_primes():
    return everything(PRIMES)
