"""Evaluation of parsed statements against the library.

Values are QRat scalars, DiffOp operators, XSeries (scalar or state-vector
coefficients) and StateVec.  Mixed levels are lifted to the common
(lcm e, lcm N) before any arithmetic.  Each statement produces a JSON-ready
dict; ``verify`` and ``report`` statements go through the check registry.
"""

from fractions import Fraction
from math import gcd

from ..cyclotomic import CycloElem
from ..errors import KFJRWError
from ..genfun import i_component, i_fjrw, i_fjrw_dual, i_untwisted, j_point
from ..operators.diffop import DiffOp, Twist
from ..operators.series import STruncSeries, XSeries
from ..qrat import QRat, expand_at
from ..statespace import StateVec, pairing, ring_mul, root_exponent, symplectic_omega
from .ast import (
    Apply, Bin, Call, ExpandAt, Indexed, Neg, Num, Omega, Pair, Pow, Program,
    Report, Sym, Verify,
)
from .checks import CHECKS, Config, run_checks, summarize, with_overrides
from .printer import cyclo_to_dsl, qrat_to_dsl, to_text

__all__ = ["EvaluationError", "Evaluator", "evaluate_text"]


class EvaluationError(KFJRWError):
    def __init__(self, message, pos=(0, 0)):
        self.pos = pos
        super().__init__(f"{pos[0]}:{pos[1]}: {message}")


class _Twisted:
    """An operator together with the character mu replacing S by mu S."""

    def __init__(self, op, mu):
        self.op, self.mu = op, mu


def _lcm(a, b):
    return a * b // gcd(a, b)


def _levels(v):
    if isinstance(v, QRat):
        return v.e, v.level
    if isinstance(v, DiffOp):
        return v.e, v.N
    if isinstance(v, StateVec):
        e = N = 1
        for c in v.entries.values():
            ce, cn = _levels(c)
            e, N = _lcm(e, ce), _lcm(N, cn)
        return e, N
    if isinstance(v, XSeries):
        e = N = 1
        for c in v.coeffs:
            ce, cn = _levels(c)
            e, N = _lcm(e, ce), _lcm(N, cn)
        return e, N
    if isinstance(v, STruncSeries):
        e = N = 1
        for c in v.coeffs:
            if isinstance(c, QRat):
                e, N = _lcm(e, c.e), _lcm(N, c.level)
        return e, N
    return 1, 1


def _lift(v, e, N):
    if isinstance(v, QRat):
        return v.lift(e, N)
    if isinstance(v, DiffOp):
        return v.lift(e, N)
    if isinstance(v, StateVec):
        return v.map_coeffs(lambda c: _lift(c, e, N))
    if isinstance(v, XSeries):
        return v.map(lambda c: _lift(c, e, N))
    if isinstance(v, STruncSeries):
        return v.map(lambda c: _lift(c, e, N) if isinstance(c, QRat) else c)
    return v


def _common(a, b):
    ea, na = _levels(a)
    eb, nb = _levels(b)
    e, N = _lcm(ea, eb), _lcm(na, nb)
    return _lift(a, e, N), _lift(b, e, N)


def _kind(v):
    return {QRat: "scalar", DiffOp: "operator", XSeries: "series", StateVec: "state"}.get(type(v), type(v).__name__)


def _binop(op, a, b, pos):
    if isinstance(a, StateVec) and isinstance(b, StateVec) and a.basis != b.basis:
        a, b = a.to_basis("idem"), b.to_basis("idem")
    a, b = _common(a, b)
    ka, kb = _kind(a), _kind(b)
    try:
        if ka == kb == "scalar":
            return {"+": a + b, "-": a - b, "*": a * b}[op] if op != "/" else a / b
        if "operator" in (ka, kb) and {ka, kb} <= {"operator", "scalar"}:
            A = a if ka == "operator" else DiffOp.scalar(a)
            if op == "/":
                if kb != "scalar":
                    raise EvaluationError("cannot divide by an operator", pos)
                return A * DiffOp.scalar(b.inverse())
            B = b if kb == "operator" else DiffOp.scalar(b)
            return {"+": A + B, "-": A - B, "*": A * B}[op]
        if ka == kb == "state":
            if op == "*":
                return ring_mul(a, b)
            if op in "+-":
                return a + b if op == "+" else a - b
        if {ka, kb} == {"state", "scalar"} and op in "*/":
            if op == "/" and kb != "scalar":
                raise EvaluationError("cannot divide by a state vector", pos)
            s, v = (a, b) if ka == "scalar" else (b, a)
            if op == "/":
                s = b.inverse()
            return v.map_coeffs(lambda c: _mul_any(c, s))
        if ka == kb == "series" and op in "+-":
            return a + b if op == "+" else a - b
        if {ka, kb} == {"series", "scalar"} and op in "*/":
            if op == "/" and kb != "scalar":
                raise EvaluationError("cannot divide by a series", pos)
            s, v = (a, b) if ka == "scalar" else (b, a)
            if op == "/":
                s = b.inverse()
            return v.map(lambda c: _mul_any(c, s))
    except KFJRWError as exc:
        if isinstance(exc, EvaluationError):
            raise
        raise EvaluationError(str(exc), pos) from exc
    raise EvaluationError(f"'{op}' is not defined between {ka} and {kb}", pos)


def _mul_any(c, s):
    if isinstance(c, StateVec):
        return c.map_coeffs(lambda v: v * s)
    return c * s


def _as_number(v, pos):
    if isinstance(v, QRat) and v.is_constant():
        c = v.constant_value()
        if c.is_rational():
            f = c.to_fraction()
            if f.denominator == 1:
                return int(f)
    raise EvaluationError("an integer is required here", pos)


class Evaluator:
    def __init__(self, config=None):
        self.cfg = config or Config()

    # expressions
    def value(self, node, order=None):
        order = self.cfg.order if order is None else order
        r = self.cfg.r
        if isinstance(node, Num):
            return QRat.const(node.value)
        if isinstance(node, Sym):
            name = node.name
            if name == "q":
                return QRat.t_power(1)
            if name == "S":
                return DiffOp.shift(1)
            if name == "x":
                return DiffOp.x_power(1)
            if name == "Jpt":
                return j_point(order)
            if name == "Iun":
                return i_untwisted(r, order, self.cfg.e_part)
            if name == "IFJRW":
                return i_fjrw(r, order)
            if name == "IFJRWdual":
                return i_fjrw_dual(r, order)
            if name == "s":
                raise EvaluationError("the formal s enters only through IFJRW and the pairings", node.pos)
            raise EvaluationError(f"'{name}' is only meaningful as an expansion point", node.pos)
        if isinstance(node, Indexed):
            if node.name == "I":
                a, j = node.indices
                if not 0 <= a < r:
                    raise EvaluationError(f"sector a={a} outside 0..{r - 1}", node.pos)
                return i_component(a, j, order, r)
            one = QRat.one()
            (k,) = node.indices
            if node.name == "phi":
                return StateVec(r, {(k, 0): one}, "delta")
            # phi[a] are idempotents, so the unit of that factor is sum_a phi[a]
            basis = "idem" if node.name == "e" else "delta"
            return StateVec(r, {(a, k): one for a in range(r)}, basis)
        if isinstance(node, Call):
            if node.name == "zeta":
                N = _as_number(self.value(node.args[0], order), node.args[0].pos)
                if N < 1:
                    raise EvaluationError("zeta(N) needs N >= 1", node.pos)
                return QRat.const(CycloElem.root(N, 1), 1, N)
            if node.name == "invq":
                v = self.value(node.args[0], order)
                if isinstance(v, (QRat, DiffOp)):
                    return v.invert_q()
                if isinstance(v, XSeries):
                    return v.map(lambda c: c.invert_q() if isinstance(c, QRat)
                                 else c.map_coeffs(lambda w: w.invert_q()))
                raise EvaluationError("invq applies to scalars, operators and series", node.pos)
            if node.name == "twist":
                op = self.value(node.args[0], order)
                mu = self.value(node.args[1], order)
                if not isinstance(mu, QRat):
                    raise EvaluationError("a twist character must be a scalar", node.args[1].pos)
                if isinstance(op, QRat):
                    op = DiffOp.scalar(op)
                if not isinstance(op, DiffOp):
                    raise EvaluationError("only operators can be twisted", node.args[0].pos)
                return _Twisted(op, mu)
        if isinstance(node, Neg):
            v = self.value(node.arg, order)
            if isinstance(v, _Twisted):
                raise EvaluationError("a twisted operator can only be applied", node.pos)
            return -v
        if isinstance(node, Pow):
            return self._power(node, order)
        if isinstance(node, Bin):
            a = self.value(node.left, order)
            b = self.value(node.right, order)
            if isinstance(a, _Twisted) or isinstance(b, _Twisted):
                raise EvaluationError("a twisted operator can only be applied", node.pos)
            return _binop(node.op, a, b, node.pos)
        raise EvaluationError(f"cannot evaluate {type(node).__name__}", getattr(node, "pos", (0, 0)))

    def _power(self, node, order):
        exp = node.exp
        if isinstance(node.base, Sym) and node.base.name == "q":
            return QRat.q_power(exp, exp.denominator, 1)
        if isinstance(node.base, Sym) and node.base.name == "S" and exp.denominator == 1:
            return DiffOp.shift(int(exp))
        base = self.value(node.base, order)
        if exp.denominator != 1:
            raise EvaluationError("fractional exponents are allowed on q only", node.pos)
        n = int(exp)
        try:
            if isinstance(base, QRat):
                return base ** n
            if isinstance(base, DiffOp):
                if n < 0:
                    raise EvaluationError("operators have no negative powers here", node.pos)
                return base ** n
        except KFJRWError as exc:
            if isinstance(exc, EvaluationError):
                raise
            raise EvaluationError(str(exc), node.pos) from exc
        raise EvaluationError(f"powers of a {_kind(base)} are not defined", node.pos)

    # statements
    def statement(self, node):
        if isinstance(node, Apply):
            return self._apply(node)
        if isinstance(node, Verify):
            return self._verify(node)
        if isinstance(node, Report):
            return self._report(node)
        if isinstance(node, ExpandAt):
            return self._expand(node)
        if isinstance(node, (Pair, Omega)):
            return self._pair(node)
        v = self.value(node)
        return {"command": "eval", "input": to_text(node), "kind": _kind(v), "result": render(v)}

    def run(self, program):
        if not isinstance(program, Program):
            program = Program((program,))
        return [self.statement(s) for s in program.statements]

    def _apply(self, node):
        order = node.order if node.order is not None else self.cfg.order
        op = self.value(node.op, order)
        mu = None
        if isinstance(op, _Twisted):
            op, mu = op.op, op.mu
        if isinstance(op, QRat):
            op = DiffOp.scalar(op)
        if not isinstance(op, DiffOp):
            raise EvaluationError("the left side of apply must be an operator", node.op.pos)
        if node.twist is not None:
            extra = self.value(node.twist, order)
            if not isinstance(extra, QRat):
                raise EvaluationError("a twist character must be a scalar", node.twist.pos)
            mu = extra if mu is None else _binop("*", mu, extra, node.twist.pos)
        target = self.value(node.target, order)
        if isinstance(target, DiffOp) and all(p == 0 for _, p in target.terms):
            coeffs = [target.terms.get((m, 0), QRat.zero(target.e, target.N)) for m in range(order + 1)]
            target = XSeries(coeffs, order)
        if not isinstance(target, XSeries):
            raise EvaluationError("apply needs a series on the right", node.target.pos)
        try:
            if target.coeffs and isinstance(target.coeffs[0], StateVec):
                result = _apply_statewise(op, target, mu, order)
            else:
                result = op.apply(target, twist=mu, order=order)
        except KFJRWError as exc:
            raise EvaluationError(str(exc), node.pos) from exc
        return {
            "command": "apply",
            "input": to_text(node),
            "operator": op.to_text(),
            "order": order,
            "is_zero": result.is_zero(),
            "first_nonzero": result.first_nonzero(),
            "result": render(result),
        }

    def _verify(self, node):
        if node.name not in CHECKS:
            raise EvaluationError(f"unknown check '{node.name}' (known: {', '.join(CHECKS)})", node.pos)
        allowed = {"a", "xi", "r", "s_order", "s", "precision_bits"}
        kw = {}
        for k, v in node.args:
            if k not in allowed:
                raise EvaluationError(f"unknown parameter '{k}' for verify", node.pos)
            kw["s_order" if k == "s" else k] = v
        cfg = with_overrides(self.cfg, order=node.order, **kw)
        reports = run_checks(node.name, cfg)
        return {"command": "verify", "input": to_text(node), "summary": summarize(reports), "reports": reports}

    def _report(self, node):
        if node.name not in CHECKS:
            raise EvaluationError(f"unknown check '{node.name}'", node.pos)
        reports = run_checks(node.name, self.cfg)
        return {"command": "report", "input": to_text(node), "summary": summarize(reports)}

    def _point(self, node, f_levels):
        if isinstance(node, Sym) and node.name == "inf":
            return "inf", None
        v = self.value(node)
        if not (isinstance(v, QRat) and v.is_constant()):
            raise EvaluationError("the expansion point must be a constant, or inf", node.pos)
        return v.constant_value(), v.level

    def _expand(self, node):
        target = self.value(node.target)
        point, plevel = self._point(node.point, _levels(target))
        out = []

        def one(f, label):
            t0, lifted = _t_point(f, point, plevel, node.pos)
            ex = expand_at(lifted, t0, node.order)
            entry = {"at": label, "variable": _local_variable(point, f.e, t0), "order_low": None, "coeffs": []}
            if ex.order_low != float("inf"):
                entry["order_low"] = ex.order_low
                entry["coeffs"] = [cyclo_to_dsl(c) for c in ex.coeffs]
            out.append(entry)

        if isinstance(target, QRat):
            one(target, "scalar")
        elif isinstance(target, StateVec):
            for (a, j), c in target.to_basis("idem").entries.items():
                one(c, f"phi[{a}] e[{j}]")
        elif isinstance(target, XSeries):
            for d, c in enumerate(target.coeffs):
                if isinstance(c, StateVec):
                    for (a, j), v in c.to_basis("idem").entries.items():
                        one(v, f"x^{d} phi[{a}] e[{j}]")
                elif not c.is_zero():
                    one(c, f"x^{d}")
        else:
            raise EvaluationError("expand-at needs a scalar, state or series", node.target.pos)
        return {"command": "expand-at", "input": to_text(node), "point": to_text(node.point), "expansions": out}

    def _pair(self, node):
        u = self.value(node.left)
        v = self.value(node.right)
        if not (isinstance(u, StateVec) and isinstance(v, StateVec)):
            raise EvaluationError("pair and omega take two state vectors", node.pos)
        u, v = _common(u, v)
        u = u.map_coeffs(lambda c: c if isinstance(c, QRat) else QRat.const(c))
        v = v.map_coeffs(lambda c: c if isinstance(c, QRat) else QRat.const(c))
        fn = pairing if isinstance(node, Pair) else symplectic_omega
        res = fn(u, v)
        return {
            "command": "pair" if isinstance(node, Pair) else "omega",
            "input": to_text(node),
            "result": render(res),
        }


def _apply_statewise(op, target, mu, order):
    keys = sorted({k for c in target.coeffs for k in c.to_basis("idem").entries})
    r = target.coeffs[0].r
    e, N = _levels(target)
    cols = {}
    for key in keys:
        series = XSeries([c.to_basis("idem").entries.get(key, QRat.zero(e, N)) for c in target.coeffs], target.order)
        cols[key] = op.apply(series, twist=mu, order=order)
    return XSeries([StateVec(r, {k: cols[k][d] for k in keys}, "idem") for d in range(order + 1)], order)


def _t_point(f, q0, qlevel, pos):
    """The point t0 with t0^e = q0 on the principal branch, and f lifted to hold it."""
    if q0 == "inf":
        return "inf", f
    if q0.is_zero():
        return 0, f
    e = f.e
    if e == 1:
        M = _lcm(f.level, q0.level)
        return q0.embed(M), f.embed(M)
    # q0 must be a root of unity zeta_M^k; t0 = zeta_(eM)^k
    for M in range(1, 4 * qlevel + 1):
        if qlevel and M % qlevel and qlevel % M:
            continue
        try:
            k = root_exponent(q0, M)
        except ValueError:
            continue
        L = _lcm(f.level, e * M)
        return CycloElem.root(e * M, k).embed(L), f.embed(L)
    raise EvaluationError("with fractional powers of q the point must be 0, inf or a root of unity", pos)


def _local_variable(point, e, t0):
    if point == "inf":
        return f"1/q^(1/{e})" if e > 1 else "1/q"
    if isinstance(t0, int) and t0 == 0:
        return f"q^(1/{e})" if e > 1 else "q"
    base = f"q^(1/{e})" if e > 1 else "q"
    val = cyclo_to_dsl(t0)
    if val.startswith("-") and " " not in val:
        return f"{base} + {val[1:]}"
    return f"{base} - {val}" if " " not in val else f"{base} - ({val})"


def render(v):
    """Text form of a value, in DSL syntax where one exists."""
    if isinstance(v, QRat):
        return qrat_to_dsl(v)
    if isinstance(v, DiffOp):
        return v.to_text()
    if isinstance(v, _Twisted):
        mu = v.mu if isinstance(v.mu, Twist) else render(v.mu)
        return f"twist({v.op.to_text()}, {mu})"
    if isinstance(v, StateVec):
        lines = []
        for (a, j), c in v.entries.items():
            sym = "e" if v.basis == "idem" else "d"
            lines.append(f"phi[{a}]*{sym}[{j}] : {render(c)}")
        return "\n".join(lines) or "0"
    if isinstance(v, XSeries):
        lines = []
        for d, c in enumerate(v.coeffs):
            body = render(c)
            if "\n" in body:
                body = "\n  " + body.replace("\n", "\n  ")
            lines.append(f"x^{d} : {body}")
        return "\n".join(lines)
    if isinstance(v, STruncSeries):
        lines = []
        for k, c in enumerate(v.coeffs):
            lines.append(f"s^{k} : {render(c)}")
        return "\n".join(lines)
    if isinstance(v, CycloElem):
        return cyclo_to_dsl(v)
    if isinstance(v, Fraction):
        return str(v)
    return str(v)


def evaluate_text(text, config=None):
    from .parser import parse

    return Evaluator(config).run(parse(text))
