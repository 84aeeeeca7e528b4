"""The r^2-dimensional state space with basis phi_a (x) e_xi.

Indices are pairs ``(a, j)`` with ``a`` the sector in Z_r and ``xi = zeta_r^j``.
A :class:`StateVec` stores its coefficients in one of two bases:

* ``"idem"``: the idempotents e_xi, e_xi = (1/r) sum_k xi^(-k) [k];
* ``"delta"``: the group elements [k], [k] = sum_xi xi^k e_xi.

Coefficients are QRat values, or STruncSeries of QRat for the s-dependent
objects.  Everything is immutable.
"""

from fractions import Fraction
from math import comb, gcd

from .cyclotomic import CycloElem
from .errors import LevelMismatch, NonPolynomialCoefficient, OrderMismatch
from .operators.series import STruncSeries
from .qrat import QRat, residue_pair, CPoly

import flint

__all__ = [
    "StateVec",
    "basis_change",
    "ring_mul",
    "pairing",
    "adams_state",
    "mu_act",
    "polarization_split",
    "symplectic_omega",
    "phi_embed",
    "root_exponent",
    "scale_coeff",
]


def scale_coeff(c, x):
    """c * x for a coefficient c (QRat or STruncSeries) and a constant x."""
    if isinstance(c, STruncSeries):
        return c.map(lambda v: scale_coeff(v, x))
    if isinstance(c, QRat):
        return c.scale(x)
    return c * x


def _zeroish(c):
    return c.is_zero()


def root_exponent(c, N):
    """k with c == zeta_N^k, or ValueError."""
    if isinstance(c, int):
        return c % N
    for k in range(N):
        z = CycloElem.root(N, k)
        M = N * c.level // gcd(N, c.level)
        if z.embed(M) == c.embed(M):
            return k
    raise ValueError(f"{c.body()} is not an {N}-th root of unity")


class StateVec:
    __slots__ = ("r", "basis", "entries")

    def __init__(self, r, entries, basis="idem"):
        if basis not in ("idem", "delta"):
            raise ValueError("basis must be 'idem' or 'delta'")
        self.r = r
        self.basis = basis
        clean = {}
        for (a, j), v in entries.items():
            key = (a % r, j % r)
            if key in clean:
                v = clean[key] + v
            clean[key] = v
        self.entries = {k: v for k, v in sorted(clean.items()) if not _zeroish(v)}

    @classmethod
    def basis_vector(cls, r, a, j, coeff, basis="idem"):
        return cls(r, {(a, j): coeff}, basis)

    def is_zero(self):
        return not self.entries

    def to_basis(self, basis):
        if basis == self.basis:
            return self
        return basis_change(self, basis)

    def map_coeffs(self, f):
        return StateVec(self.r, {k: f(v) for k, v in self.entries.items()}, self.basis)

    def _align(self, other):
        if not isinstance(other, StateVec):
            raise TypeError("expected a StateVec")
        if other.r != self.r:
            raise LevelMismatch(f"state spaces of rank {self.r} and {other.r}")
        return other.to_basis(self.basis)

    def __add__(self, other):
        other = self._align(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return StateVec(self.r, out, self.basis)

    def __neg__(self):
        return self.map_coeffs(lambda v: -v)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return self.map_coeffs(lambda v: v * c)

    __rmul__ = __mul__

    def scale(self, c):
        return self.map_coeffs(lambda v: scale_coeff(v, c))

    def __eq__(self, other):
        if not isinstance(other, StateVec):
            return NotImplemented
        if other.r != self.r:
            return False
        other = other.to_basis(self.basis)
        if self.entries.keys() != other.entries.keys():
            return False
        return all(self.entries[k] == other.entries[k] for k in self.entries)

    __hash__ = None

    def __getitem__(self, key):
        return self.entries.get(key)

    def component(self, a, j):
        return self.to_basis("idem").entries.get((a % self.r, j % self.r))

    def body(self):
        lines = []
        for (a, j), v in self.entries.items():
            txt = v.body() if hasattr(v, "body") else repr(v)
            lines.append(f"phi[{a}] {'e' if self.basis == 'idem' else 'd'}[{j}] : {txt}")
        return "\n".join(lines) if lines else "0"

    def to_text(self):
        e = N = None
        for v in self.entries.values():
            if isinstance(v, QRat):
                e, N = v.e, v.level
                break
        head = f"statevec r={self.r} basis={self.basis}"
        if e is not None:
            head += f" e={e} N={N}"
        return head + "\n" + self.body()

    @classmethod
    def from_text(cls, text):
        import re

        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        m = re.fullmatch(r"statevec r=(\d+) basis=(\w+)(?: e=(\d+) N=(\d+))?", lines[0].strip())
        if not m:
            raise ValueError("bad statevec header")
        r, basis = int(m.group(1)), m.group(2)
        e = int(m.group(3) or 1)
        N = int(m.group(4) or 1)
        entries = {}
        for ln in lines[1:]:
            if ln.strip() == "0":
                continue
            mm = re.fullmatch(r"\s*phi\[(\d+)\] [ed]\[(\d+)\] : (.*)", ln)
            if not mm:
                raise ValueError(f"bad statevec line {ln!r}")
            entries[(int(mm.group(1)), int(mm.group(2)))] = QRat.parse_body(mm.group(3), e, N)
        return cls(r, entries, basis)

    def __repr__(self):
        return f"StateVec(r={self.r}, basis={self.basis}, {len(self.entries)} entries)"


def basis_change(v, direction=None):
    """Switch between the [k] basis ("delta") and the idempotent basis ("idem")."""
    r = v.r
    target = direction or ("delta" if v.basis == "idem" else "idem")
    if target == v.basis:
        return v
    out = {}
    if target == "delta":
        # e_j = (1/r) sum_k zeta^(-jk) [k]
        for (a, j), c in v.entries.items():
            for k in range(r):
                w = scale_coeff(c, CycloElem.root(r, -j * k) * Fraction(1, r))
                out[(a, k)] = out[(a, k)] + w if (a, k) in out else w
    else:
        # [k] = sum_j zeta^(jk) e_j
        for (a, k), c in v.entries.items():
            for j in range(r):
                w = scale_coeff(c, CycloElem.root(r, j * k))
                out[(a, j)] = out[(a, j)] + w if (a, j) in out else w
    return StateVec(r, out, target)


def ring_mul(u, v):
    """phi_a[d] * phi_a'[d'] = delta_{a,a'} phi_a[d+d'], i.e. componentwise on idempotents."""
    if u.r != v.r:
        raise LevelMismatch("ring_mul needs equal r")
    if u.basis == "delta" and v.basis == "delta":
        out = {}
        for (a, d), x in u.entries.items():
            for (b, d2), y in v.entries.items():
                if a == b:
                    key = (a, (d + d2) % u.r)
                    w = x * y
                    out[key] = out[key] + w if key in out else w
        return StateVec(u.r, out, "delta")
    u = u.to_basis("idem")
    v = v.to_basis("idem")
    out = {k: x * v.entries[k] for k, x in u.entries.items() if k in v.entries}
    return StateVec(u.r, out, "idem")


def _broad_poly(xi, rank):
    """Coefficients of (1 - xi s)^rank / rank."""
    return [CycloElem.rational(xi.level, Fraction(comb(rank, k), rank)) * (-xi) ** k for k in range(rank + 1)]


def pairing(u, v, s=None, rank=None):
    """Bilinear pairing; ``s`` formal (STruncSeries output) unless a value is given.

    ``rank`` is the r in 1/r and (1 - xi s)^r; it defaults to ``u.r``.  For
    the level-rm space the fake-theory normalization is ``rank = r``.
    """
    if u.r != v.r:
        raise LevelMismatch("pairing needs equal r")
    r = u.r
    rank = r if rank is None else rank
    u = u.to_basis("idem")
    v = v.to_basis("idem")
    total = None
    broad = None
    for (a, j), x in u.entries.items():
        y = v.entries.get(((-a) % r, j))
        if y is None:
            continue
        prod = x * y
        if a != 0:
            term = prod * Fraction(1, rank)
            total = term if total is None else total + term
        else:
            cs = _broad_poly(CycloElem.root(r, j), rank)
            if s is None:
                term = STruncSeries([scale_coeff(prod, c) for c in cs], rank)
            else:
                if isinstance(s, QRat):
                    val = QRat.zero(s.e, s.level)
                    for k, c in enumerate(cs):
                        val = val + (s ** k).scale(c)
                else:
                    val = sum((c * s ** k for k, c in enumerate(cs)), CycloElem.zero(cs[0].level))
                term = prod * val if isinstance(val, QRat) else scale_coeff(prod, val)
            broad = term if broad is None else broad + term
    if s is None:
        if broad is None and total is None:
            return STruncSeries([Fraction(0)], rank)
        if broad is None:
            return STruncSeries([total], rank)
        if total is not None:
            broad = STruncSeries([broad[0] + total] + list(broad.coeffs[1:]), rank)
        return broad
    if broad is None:
        return total if total is not None else Fraction(0)
    return broad if total is None else broad + total


def adams_state(m, v, on_coefficients=False):
    """Psi^m(phi_a e_xi) = sum_{zeta^m = xi} phi_a e_zeta."""
    r = v.r
    v = v.to_basis("idem")
    out = {}
    for (a, j), c in v.entries.items():
        if on_coefficients and isinstance(c, QRat):
            c = c.adams(m)
        for k in range(r):
            if (k * m - j) % r == 0:
                out[(a, k)] = out[(a, k)] + c if (a, k) in out else c
    return StateVec(r, out, "idem")


def _mu_coeff(c, zeta, r):
    if isinstance(c, STruncSeries):
        return c.map(lambda v: _mu_coeff(v, zeta, r))
    if r % c.e:
        raise LevelMismatch(f"coefficient lives at q^(1/{c.e}); the mu_{r}-action needs e | r")
    c = c.rebase(r)
    M = c.level * r // gcd(c.level, r)
    return c.embed(M).scale_var(zeta.embed(M))


def mu_act(k, f, laurent_only=False):
    """zeta_r^k . f : coefficients f(t) -> f(zeta t), e_xi -> e_{xi zeta^(a k)}.

    ``f`` may be a StateVec or an XSeries of StateVecs.  With
    ``laurent_only`` a coefficient that is not a Laurent polynomial raises
    NonPolynomialCoefficient (the strict monomial rule).
    """
    from .operators.series import XSeries

    if isinstance(f, XSeries):
        return f.map(lambda v: mu_act(k, v, laurent_only))
    r = f.r
    f = f.to_basis("idem")
    zeta = CycloElem.root(r, k)
    out = {}
    for (a, j), c in f.entries.items():
        if laurent_only and isinstance(c, QRat) and not c.is_laurent():
            raise NonPolynomialCoefficient(f"coefficient at phi[{a}] e[{j}] is not a Laurent polynomial")
        key = (a, (j + a * k) % r)
        w = _mu_coeff(c, zeta, r)
        out[key] = out[key] + w if key in out else w
    return StateVec(r, out, "idem")


def _split_qrat(c):
    """(plus, minus): Laurent polynomial part and proper part regular at 0."""
    den = c.den
    cs = den.coeffs()
    v = 0
    while v < len(cs) and cs[v] == 0:
        v += 1
    d0 = flint.fmpq_poly(cs[v:]) if v else den
    N = c.level
    alphas, betas = [], []
    # inverse of d0 modulo t^v
    inv = []
    if v:
        b0 = d0[0]
        for n in range(v):
            acc = flint.fmpq(1) if n == 0 else flint.fmpq(0)
            for k in range(1, n + 1):
                if k <= d0.degree():
                    acc -= d0[k] * inv[n - k]
            inv.append(acc / b0)
    inv_poly = flint.fmpq_poly(inv) if v else None
    tv = flint.fmpq_poly([0] * v + [1])
    quots, rems = [], []
    for p in c.num.comps:
        if v:
            prod = p * inv_poly
            al = flint.fmpq_poly(prod.coeffs()[:v])
            rest = p - al * d0
            beta = rest / tv  # exact
        else:
            al = flint.fmpq_poly([])
            beta = p
        qq, rr = divmod(beta, d0)
        alphas.append(al)
        quots.append(qq)
        rems.append(rr)
    # plus = alpha / t^v + quotient, minus = rem / d0
    plus_num = CPoly(N, [al + qq * tv for al, qq in zip(alphas, quots)])
    plus = QRat(c.e, N, plus_num, tv if v else flint.fmpq_poly([1]))
    minus = QRat(c.e, N, CPoly(N, rems), d0)
    return plus, minus


def polarization_split(f):
    """Split a QRat or StateVec into (plus, minus) with plus + minus == f.

    plus is the Laurent polynomial part; minus is regular at q = 0 and
    vanishes at q = infinity.
    """
    if isinstance(f, QRat):
        return _split_qrat(f)
    plus, minus = {}, {}
    for k, c in f.entries.items():
        p, m = _split_qrat(c)
        plus[k] = p
        minus[k] = m
    return StateVec(f.r, plus, f.basis), StateVec(f.r, minus, f.basis)


def symplectic_omega(f, g, s=None, rank=None):
    """Res_{q=0} + Res_{q=inf} of <f(q), g(1/q)> dq/q."""
    g_inv = g.map_coeffs(lambda c: c.invert_q())
    h = pairing(f, g_inv, s=s, rank=rank)
    if isinstance(h, STruncSeries):
        return h.map(lambda c: residue_pair(c) if isinstance(c, QRat) else c)
    if isinstance(h, QRat):
        return residue_pair(h)
    return h


def phi_embed(kind, v, m, xi0=None):
    """Phi_0 or Phi_xi0 from the level-r space into the level-rm space.

    Phi_0(phi_a e_xi) = phi_{ma} e_xi.
    Phi_xi0(phi_a e_xi) = sum_l phi_{a+rl} e_{xi xi0^(-a-rl)}.
    ``xi0`` is an exponent of zeta_{rm} or a CycloElem root of unity.
    """
    r = v.r
    rm = r * m
    v = v.to_basis("idem")

    def lift(c):
        if isinstance(c, STruncSeries):
            return c.map(lift)
        e = c.e * rm // gcd(c.e, rm)
        N = c.level * rm // gcd(c.level, rm)
        return c.lift(e, N)

    out = {}
    if kind in ("zero", 0, "0"):
        for (a, j), c in v.entries.items():
            out[(m * a, m * j)] = lift(c)
        return StateVec(rm, out, "idem")
    if xi0 is None:
        raise ValueError("Phi_xi0 needs xi0")
    j0 = root_exponent(xi0, rm) if not isinstance(xi0, int) else xi0 % rm
    if gcd(j0, m) != 1:
        raise OrderMismatch(f"xi0^r = zeta_{m}^{j0} does not have order {m}")
    for (a, j), c in v.entries.items():
        cc = lift(c)
        for l in range(m):
            b = a + r * l
            key = (b, (m * j - j0 * b) % rm)
            out[key] = out[key] + cc if key in out else cc
    return StateVec(rm, out, "idem")
