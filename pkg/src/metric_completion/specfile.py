"""Parser for the line-oriented specification format (see docs/grammar.md).

Each nonblank line is one statement; ``#`` starts a comment.  Errors are
raised as SpecParseError with the line, the column and the grammar rule
that failed.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import factorint

from . import metric as Mt
from . import thick as T
from .derived import SplitObject, canonical_preprojective_map, integer_map
from .derived import ModuleMap
from .errors import MetricCompletionError, SpecParseError
from .fields import (FiniteField, PointUniverse, PrimeUniverse, Rational, SymbolicUncountable,
                     closed_point, formal_point, point)
from .indec import (DynkinAn, IntegerRing, Interval, Kronecker, KroneckerColimit,
                    LocalizedFree, Preinjective, Preprojective, Regular, ZFree,
                    ZTorsion)
from .labels import PRIMES, LabelSet, cofinite, empty, everything, finite, primes_from, tail_union
from .linalg import Mat

_WS = re.compile(r"[ \t]*")
_INT = re.compile(r"-?\d+")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass
class SpecFile:
    ring: object = None
    thick: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    objects: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    sequences: dict = field(default_factory=dict)
    queries: list = field(default_factory=list)


class _Cursor:
    def __init__(self, text, line):
        self.text, self.pos, self.line = text, 0, line

    def ws(self):
        self.pos = _WS.match(self.text, self.pos).end()

    def error(self, msg, rule, at=None):
        raise SpecParseError(msg, self.line, (self.pos if at is None else at) + 1, rule)

    def start(self):
        self.ws()
        return self.pos

    def at_end(self):
        self.ws()
        return self.pos >= len(self.text)

    def peek(self, lit):
        self.ws()
        return self.text.startswith(lit, self.pos)

    def peek_word(self, word):
        self.ws()
        m = _NAME.match(self.text, self.pos)
        return m is not None and m.group() == word

    def accept(self, lit):
        if self.peek(lit):
            self.pos += len(lit)
            return True
        return False

    def accept_word(self, word):
        if self.peek_word(word):
            self.pos += len(word)
            return True
        return False

    def expect(self, lit, rule):
        if not self.accept(lit):
            self.error(f"expected '{lit}'", rule)

    def word(self, rule):
        self.ws()
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.error("expected a name", rule)
        self.pos = m.end()
        return m.group()

    def integer(self, rule):
        self.ws()
        m = _INT.match(self.text, self.pos)
        if not m:
            self.error("expected an integer", rule)
        self.pos = m.end()
        return int(m.group())

    def number(self, rule):
        a = self.integer(rule)
        if self.accept("/"):
            b = self.integer(rule)
            if b == 0:
                self.error("zero denominator", rule)
            return Fraction(a, b)
        return a

    def done(self, rule):
        if not self.at_end():
            self.error("unexpected trailing input", rule)


class _Parser:
    def __init__(self, field_override=None):
        self.spec = SpecFile()
        self.field_override = field_override

    # --- statements ---------------------------------------------------------
    def statement(self, c):
        kw = c.word("statement")
        handler = getattr(self, "st_" + kw, None)
        if handler is None:
            c.pos -= len(kw)
            c.error(f"unknown statement '{kw}'", "statement")
        if kw != "ring" and self.spec.ring is None:
            c.error("the ring must be declared first", "statement", 0)
        handler(c)
        c.done(kw)

    def st_ring(self, c):
        if self.spec.ring is not None:
            c.error("ring declared twice", "ring", 0)
        if c.accept_word("Z"):
            self.spec.ring = IntegerRing()
        elif c.accept_word("kronecker"):
            F = self.field(c)
            self.spec.ring = Kronecker(self.field_override or F)
        elif c.accept_word("dynkin"):
            n = c.integer("ring")
            try:
                self.spec.ring = DynkinAn(n)
            except MetricCompletionError as e:
                c.error(str(e), "ring")
        else:
            c.error("expected Z, kronecker or dynkin", "ring")

    def field(self, c):
        if c.accept_word("rational"):
            return Rational()
        if c.accept_word("symbolic"):
            return SymbolicUncountable()
        if c.at_end():
            return self.field_override or Rational()
        q = c.integer("field")
        try:
            return FiniteField(q)
        except ValueError as e:
            c.error(str(e), "field")

    def _define(self, c, table, rule):
        at = c.start()
        name = c.word(rule)
        if name in table:
            c.error(f"{name} defined twice", rule, at)
        c.expect("=", rule)
        return name

    def st_thick(self, c):
        name = self._define(c, self.spec.thick, "thick")
        self.spec.thick[name] = self.desc(c)

    def st_metric(self, c):
        name = self._define(c, self.spec.metrics, "metric")
        M = self.metric(c)
        self.spec.metrics[name] = M

    def st_object(self, c):
        name = self._define(c, self.spec.objects, "object")
        self.spec.objects[name] = self.obj(c)

    def st_map(self, c):
        name = self._define(c, self.spec.maps, "map")
        self.spec.maps[name] = self.module_map(c)

    def st_sequence(self, c):
        name = self._define(c, self.spec.sequences, "sequence")
        self.spec.sequences[name] = self.sequence(c)

    def st_query(self, c):
        at = c.start()
        kind = c.word("query")
        if kind not in ("classify", "lattice", "hom", "cone", "check", "support", "build"):
            c.error(f"unknown query '{kind}'", "query", at)
        args = []
        while kind != "build" and not c.at_end() and _NAME.match(c.text, c.pos):
            args.append(c.word("query"))
        if kind == "build":
            C = self.desc(c)
            if not c.accept_word("start"):
                c.error("expected 'start'", "query")
            X = self.obj(c)
            if not c.accept_word("steps"):
                c.error("expected 'steps'", "query")
            args = [C, X, c.integer("query")]
        if kind == "check" and not c.at_end():
            args.append(c.integer("query"))
        self.spec.queries.append((kind, args, c.line))

    # --- thick descriptors ----------------------------------------------------------
    def desc(self, c):
        R = self.spec.ring
        rule = "descriptor"
        if c.accept_word("zero"):
            return T.zero(R)
        if c.accept_word("all"):
            return T.everything_in(R)
        if c.accept_word("torsion"):
            if not isinstance(R, IntegerRing):
                c.error("torsion descriptors live over Z", rule)
            return T.torsion(self.labels(c, PRIMES), R)
        if c.accept_word("regular"):
            if not isinstance(R, Kronecker):
                c.error("regular descriptors live over the Kronecker algebra", rule)
            return T.regular_part(R, self.labels(c, PointUniverse(R.field)))
        if c.accept_word("exceptional"):
            mods = self.modules(c)
            try:
                return T.exceptional(R, tuple(mods))
            except (MetricCompletionError, ValueError) as e:
                c.error(str(e), rule)
        if c.accept_word("closure"):
            mods = self.modules(c)
            try:
                return T.thick_closure(R, mods)
            except (MetricCompletionError, ValueError) as e:
                c.error(str(e), rule)
        save = c.start()
        name = c.word(rule)
        if name in self.spec.thick:
            return self.spec.thick[name]
        c.pos = save
        c.error(f"unknown descriptor '{name}'", rule)

    def labels(self, c, u):
        rule = "labelset"
        if c.accept_word("all"):
            return everything(u)
        if c.accept_word("cofinite"):
            return cofinite(u, self.label_list(c, u))
        if c.accept_word("from"):
            return self.tail(c, u, ())
        elems = self.label_list(c, u) if c.peek("{") else c.error("expected a label set", rule)
        if c.accept("+"):
            if not c.accept_word("from"):
                c.error("expected 'from'", rule)
            return self.tail(c, u, elems)
        return finite(u, elems)

    def tail(self, c, u, elems):
        if isinstance(u, PrimeUniverse):
            return primes_from(c.integer("labelset"), elems)
        return tail_union(u, elems, c.integer("labelset"))

    def label_list(self, c, u):
        c.expect("{", "labelset")
        out = []
        if not c.accept("}"):
            while True:
                out.append(self.label(c, u))
                if c.accept("}"):
                    break
                c.expect(",", "labelset")
        return out

    def label(self, c, u):
        if isinstance(u, PrimeUniverse):
            at = c.start()
            p = c.integer("label")
            try:
                PRIMES.check(p)
            except ValueError as e:
                c.error(str(e), "label", at)
            return p
        return self.point(c)

    def point(self, c):
        F = self.spec.ring.field
        rule = "point"
        try:
            if c.accept("("):
                x = c.number(rule)
                c.expect(":", rule)
                y = c.number(rule)
                c.expect(")", rule)
                return point(F, x, y)
            if c.accept("["):
                coeffs = self.poly(c)
                c.expect("]", rule)
                return closed_point(F, coeffs)
        except (MetricCompletionError, ValueError, ZeroDivisionError) as e:
            c.error(str(e), rule)
        if not F.is_uncountable:
            c.error("expected a point (x:y) or [polynomial]", rule)
        return formal_point(c.word(rule))

    def poly(self, c):
        """Polynomial in t such as t^2+t+1; returns coefficients low to high."""
        c.ws()
        m = re.compile(r"[-+0-9t^/ ]+").match(c.text, c.pos)
        if not m:
            c.error("expected a polynomial in t", "polynomial")
        src = m.group().replace(" ", "")
        coeffs = {}
        for sign, coef, var, exp in re.findall(r"([+-]?)(\d+(?:/\d+)?)?(t)?(?:\^(\d+))?", src):
            if not coef and not var:
                continue
            k = int(exp) if exp else (1 if var else 0)
            v = Fraction(coef) if coef else Fraction(1)
            coeffs[k] = coeffs.get(k, 0) + (-v if sign == "-" else v)
        c.pos = m.end()
        if not coeffs:
            c.error("empty polynomial", "polynomial")
        return [coeffs.get(k, 0) for k in range(max(coeffs) + 1)]

    # --- modules and objects --------------------------------------------------------
    def module(self, c):
        R = self.spec.ring
        rule = "module"
        at = c.start()
        if isinstance(R, DynkinAn):
            c.expect("[", rule)
            i = c.integer(rule)
            c.expect(",", rule)
            j = c.integer(rule)
            c.expect("]", rule)
            if not 1 <= i <= j <= R.n:
                c.error(f"interval [{i},{j}] outside A{R.n}", rule, at)
            return Interval(i, j)
        if isinstance(R, IntegerRing):
            if c.accept("Z/"):
                q = c.integer(rule)
                f = factorint(q)
                if q < 2 or len(f) != 1:
                    c.error("torsion modules are cyclic of prime power order", rule, at)
                (p, k), = f.items()
                return ZTorsion(p, k)
            if c.accept("Z["):
                ps = []
                while True:
                    c.expect("1/", rule)
                    ps.append(self.label(c, PRIMES))
                    if c.accept("]"):
                        break
                    c.expect(",", rule)
                try:
                    return LocalizedFree(LabelSet(PRIMES, plus=frozenset(ps)))
                except ValueError as e:
                    c.error(str(e), rule)
            if c.accept_word("Z"):
                return ZFree()
            c.error("expected Z, Z/q or Z[1/p,...]", rule)
        m = re.compile(r"([PIRE])").match(c.text, c.pos)
        if not m:
            c.error("expected P<n>, I<n>, R(point) or E{points}", rule)
        c.pos += 1
        kind = m.group(1)
        if kind in "PI":
            n = c.integer(rule)
            if n < 0:
                c.error("index must be >= 0", rule)
            return Preprojective(n) if kind == "P" else Preinjective(n)
        if kind == "E":
            return KroneckerColimit(self.labels(c, PointUniverse(R.field)))
        return self.regular(c)

    def regular(self, c):
        rule = "module"
        F = self.spec.ring.field
        k = 1
        try:
            if c.accept("("):
                if F.is_uncountable:
                    pt = formal_point(c.word(rule))
                else:
                    x = c.number(rule)
                    c.expect(":", rule)
                    y = c.number(rule)
                    pt = point(F, x, y)
                if c.accept(";"):
                    k = c.integer(rule)
                c.expect(")", rule)
            elif c.accept("["):
                pt = closed_point(F, self.poly(c))
                if c.accept(";"):
                    k = c.integer(rule)
                c.expect("]", rule)
            else:
                c.error("expected R(x:y), R(label) or R[polynomial]", rule)
            return Regular(pt, k)
        except (ValueError, ZeroDivisionError) as e:
            c.error(str(e), rule)

    def modules(self, c):
        out = [self.module(c)]
        while c.accept(","):
            out.append(self.module(c))
        return out

    def obj(self, c):
        rule = "object"
        if c.accept("0"):
            return SplitObject()
        save = c.pos
        m = _NAME.match(c.text, c.pos)
        if m and m.group() in self.spec.objects:
            c.pos = m.end()
            return self.spec.objects[m.group()]
        c.pos = save
        pairs = []
        while True:
            M = self.module(c)
            mult = 1
            if c.accept("^"):
                mult = c.integer(rule)
                if mult < 1:
                    c.error("multiplicity must be positive", rule)
            d = 0
            if c.accept("@"):
                d = c.integer(rule)
            pairs += [(d, M)] * mult
            if not c.accept("+"):
                break
        return SplitObject(tuple(pairs))

    # --- maps -------------------------------------------------------------------------
    def module_map(self, c):
        R = self.spec.ring
        rule = "map"
        if c.accept_word("canonical"):
            if not isinstance(R, Kronecker):
                c.error("canonical maps P(n-1) -> P(n) live over the Kronecker algebra", rule)
            n = c.integer(rule)
            pt = self.point(c)
            try:
                return canonical_preprojective_map(R.field, n, pt)
            except (MetricCompletionError, ValueError) as e:
                c.error(str(e), rule)
        src = self.modules_plus(c)
        c.expect("--", rule)
        if isinstance(R, IntegerRing):
            data = self.int_matrix(c, len(src))
        else:
            c.expect("(", rule)
            a = self.int_matrix(c, None)
            c.expect(";", rule)
            b = self.int_matrix(c, None)
            c.expect(")", rule)
            data = (a, b)
        c.expect("-->", rule)
        tgt = self.modules_plus(c)
        try:
            if isinstance(R, IntegerRing):
                return integer_map(src, tgt, data)
            F = R.field
            mats = tuple(Mat.of([[F.coerce(x) for x in row] for row in m], None) if m else None for m in data)
            from .reps import KRONECKER_ARROWS, direct_sum, explicit_rep
            rs = direct_sum([explicit_rep(M, F) for M in src], F, KRONECKER_ARROWS, 2)
            rt = direct_sum([explicit_rep(N, F) for N in tgt], F, KRONECKER_ARROWS, 2)
            mats = tuple(m if m is not None else Mat.zeros(F, rt.dims[v], rs.dims[v]) for v, m in enumerate(mats))
            return ModuleMap(R, tuple(src), tuple(tgt), mats)
        except MetricCompletionError as e:
            c.error(str(e), rule)

    def modules_plus(self, c):
        out = [self.module(c)]
        while c.accept("+"):
            out.append(self.module(c))
        return out

    def int_matrix(self, c, ncols):
        """An integer (1x1 shorthand) or [[a, b], [c, d]]."""
        rule = "matrix"
        c.ws()
        if not c.peek("["):
            x = c.number(rule)
            return ((x,),)
        c.expect("[", rule)
        rows = []
        if c.accept("]"):
            return ()
        while True:
            c.expect("[", rule)
            row = []
            if not c.accept("]"):
                while True:
                    row.append(c.number(rule))
                    if c.accept("]"):
                        break
                    c.expect(",", rule)
            rows.append(tuple(row))
            if c.accept("]"):
                break
            c.expect(",", rule)
        if len({len(r) for r in rows}) > 1:
            c.error("ragged matrix", rule)
        return tuple(rows)

    # --- sequences ------------------------------------------------------------------------
    def sequence(self, c):
        from .cauchy import (FormalConeWitness, ModuleMapWitness,
                             MultiplicationWitness, ObjectSequence)
        rule = "sequence"
        entries = [self.obj(c)]
        maps = []
        while c.accept("-"):
            if c.accept("*"):
                k = c.integer(rule)
                if k == 0:
                    c.error("multiplication by 0", rule)
                w = MultiplicationWitness(k)
            elif c.accept_word("cone"):
                c.expect("(", rule)
                w = FormalConeWitness(self.obj(c))
                c.expect(")", rule)
            else:
                name = c.word(rule)
                if name not in self.spec.maps:
                    c.error(f"unknown map '{name}'", rule)
                d = c.integer(rule) if c.accept("@") else 0
                w = ModuleMapWitness(self.spec.maps[name], d)
            c.expect("->", rule)
            maps.append(w)
            entries.append(self.obj(c))
        try:
            return ObjectSequence(tuple(entries), tuple(maps))
        except (ValueError, MetricCompletionError) as e:
            c.error(str(e), rule)

    # --- metrics -----------------------------------------------------------------------
    def metric(self, c):
        R = self.spec.ring
        rule = "metric"
        try:
            if c.accept_word("constant"):
                return Mt.mk_constant(self.desc(c))
            if c.accept_word("aisle"):
                return Mt.mk_aisle(R)
            if c.accept_word("coaisle"):
                return Mt.mk_coaisle(R)
            if c.accept_word("t_structure"):
                return Mt.mk_t_structure(R)
            for op in ("meet", "join"):
                if c.accept_word(op):
                    a, b = self.metric_ref(c), self.metric_ref(c)
                    return getattr(Mt, op)(a, b)
            if c.accept_word("t_submetric"):
                return Mt.t_submetric(self.metric_ref(c))
            if c.accept_word("nf"):
                return self.nf(c)
        except SpecParseError:
            raise
        except MetricCompletionError as e:
            c.error(str(e), rule)
        c.error("expected constant, aisle, coaisle, t_structure, meet, join, t_submetric or nf", rule)

    def metric_ref(self, c):
        save = c.start()
        name = c.word("metric")
        if name not in self.spec.metrics:
            c.pos = save
            c.error(f"unknown metric '{name}'", "metric")
        return self.spec.metrics[name]

    def nf(self, c):
        R = self.spec.ring
        chain = lower = upper = lchain = uchain = None
        while not c.at_end():
            c.accept(";")
            if c.accept_word("chain"):
                chain = self.chain(c)
            elif c.accept_word("lower"):
                lower = self.edge(c)
                lchain = self.chain(c) if c.accept_word("with") else None
            elif c.accept_word("upper"):
                upper = self.edge(c)
                uchain = self.chain(c) if c.accept_word("with") else None
            else:
                c.error("expected chain, lower or upper", "nf")
        if chain is None:
            c.error("nf needs a chain clause", "nf")
        return Mt.mk_zoned(R, chain, lower, lchain, upper, uchain)

    def edge(self, c):
        rule = "edge"
        pre = ()
        if c.accept("["):
            vals = [c.integer(rule)]
            while c.accept(","):
                vals.append(c.integer(rule))
            c.expect("]", rule)
            if not c.accept_word("then"):
                c.error("expected 'then'", rule)
            pre = tuple(vals)
        if not c.accept_word("linear"):
            c.error("expected 'linear'", rule)
        base, step = 0, 1
        if not c.at_end() and _INT.match(c.text, c.pos):
            base = c.integer(rule)
            if not c.at_end() and _INT.match(c.text, c.pos):
                step = c.integer(rule)
        return Mt.EdgeSchedule(pre, base, step)

    def chain(self, c):
        R = self.spec.ring
        rule = "chain"
        for kw in ("prime_tail", "tube_tail"):
            if c.accept_word(kw):
                if kw == "prime_tail" and not isinstance(R, IntegerRing):
                    c.error("prime_tail lives over Z", rule)
                if kw == "tube_tail" and not isinstance(R, Kronecker):
                    c.error("tube_tail lives over the Kronecker algebra", rule)
                u = PRIMES if kw == "prime_tail" else PointUniverse(R.field)
                base, offset, step = empty(u), -1, 1
                while True:
                    if c.accept_word("base"):
                        base = self.labels(c, u)
                    elif c.accept_word("offset"):
                        offset = c.integer(rule)
                    elif c.accept_word("step"):
                        step = c.integer(rule)
                    else:
                        break
                if kw == "prime_tail":
                    return Mt.prime_tail(base, offset, step)
                return Mt.tube_tail(R, base, offset, step)
        if c.accept_word("prefix"):
            pre = [self.desc(c)]
            while c.accept("|"):
                pre.append(self.desc(c))
            if not c.accept_word("then"):
                c.error("expected 'then'", rule)
            return Mt.prefix_chain(pre, self.desc(c))
        return Mt.constant_chain(self.desc(c))


def parse(text, field_override=None):
    p = _Parser(field_override)
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        p.statement(_Cursor(line, i))
    if p.spec.ring is None:
        raise SpecParseError("missing ring declaration", 1, 1, "file")
    return p.spec


def parse_file(path, field_override=None):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), field_override)


def parse_object(spec, text):
    """Parse a standalone object expression against the ring of spec."""
    p = _Parser()
    p.spec = spec
    c = _Cursor(text, 1)
    X = p.obj(c)
    c.done("object")
    return X


def parse_map(ring, text):
    """Parse a standalone map such as 'Z --2--> Z'."""
    p = _Parser()
    p.spec.ring = ring
    c = _Cursor(text, 1)
    f = p.module_map(c)
    c.done("map")
    return f
