"""Truncated arithmetic in W(F_{p^n})[pi]/(pi^(p-1) + p) and the
Stickelberger / Gross-Koblitz verifiers.

The ring: elements are polynomials in the uniformizer pi of degree < p-1
whose coefficients live in the unramified ring W = Z_p[x]/(M~), M~ the
integer lift of the field tower's modulus, truncated at p^K.  The relation
pi^(p-1) = -p makes v(pi) = 1, v(p) = p-1 in pi-units.

Pinned choices (they select the prime over p that the whole artifact uses):

* the Teichmueller lift of the tower generator g fixes the unramified part,
  so the character chi_e literally reduces to x -> x^e on the residue field;
* zeta_p is the unique p-th root of unity congruent to 1 + pi mod pi^2
  (for p = 2, pi = -2 and zeta_2 = -1 = 1 + pi exactly).

Under this joint pinning the classical statements hold verbatim:
ord S(omega^{-k}) = s(k), the unit congruence -t(k)^{-1} (zeta_p - 1)^{s(k)},
and S(omega^a) = (-1)^n p^n pi^(-s(a)) prod Gamma_p(1 - <p^i a/(p^n-1)>).

Precision bookkeeping is coarse: contexts are built with slack beyond the
valuations being measured, and pi-divisions (one exact p-division of a
coordinate per wrap) stay far from the floor.  Checks raise PrecisionError
rather than silently comparing truncated zeros.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import digits
from .chars import MultChar
from .cyclo import CycloElement
from .errors import ArgumentError, PrecisionError
from .ff import FieldTower
from .gauss import gauss_S


class RamifiedContext:
    """Arithmetic context: p, residue degree n, unramified modulus, precision K."""

    def __init__(self, p: int, n: int, modulus: tuple[int, ...], K: int):
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise ArgumentError("modulus must be monic of degree n")
        self.p = p
        self.n = n
        self.e = p - 1
        self.K = K
        self.pK = p**K
        self.modulus = tuple(int(c) % self.pK for c in modulus)
        self.prec_floor = (p - 1) * K  # valuations at or beyond this read ">= floor"

    # -- unramified (W) arithmetic: tuples of n ints mod p^K ----------------

    def w_zero(self) -> tuple[int, ...]:
        return (0,) * self.n

    def w_from_int(self, c: int) -> tuple[int, ...]:
        return (c % self.pK,) + (0,) * (self.n - 1)

    def w_add(self, a, b) -> tuple[int, ...]:
        return tuple((x + y) % self.pK for x, y in zip(a, b))

    def w_sub(self, a, b) -> tuple[int, ...]:
        return tuple((x - y) % self.pK for x, y in zip(a, b))

    def w_scale(self, a, c: int) -> tuple[int, ...]:
        return tuple(x * c % self.pK for x in a)

    def w_mul(self, a, b) -> tuple[int, ...]:
        n, pK = self.n, self.pK
        tmp = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    tmp[i + j] += x * y
        for d in range(2 * n - 2, n - 1, -1):
            c = tmp[d] % pK
            if c:
                for j in range(n):
                    tmp[d - n + j] -= c * self.modulus[j]
            tmp[d] = 0
        return tuple(t % pK for t in tmp[:n])

    def w_pow(self, a, k: int) -> tuple[int, ...]:
        out = self.w_from_int(1)
        acc = a
        while k:
            if k & 1:
                out = self.w_mul(out, acc)
            acc = self.w_mul(acc, acc)
            k >>= 1
        return out

    # -- ramified elements: tuples of (p-1) W-coefficients -------------------

    def zero(self) -> "RamifiedPadic":
        return RamifiedPadic(self, ((0,) * self.n,) * self.e)

    def from_int(self, c: int) -> "RamifiedPadic":
        coeffs = [self.w_zero() for _ in range(self.e)]
        coeffs[0] = self.w_from_int(c)
        return RamifiedPadic(self, tuple(coeffs))

    def one(self) -> "RamifiedPadic":
        return self.from_int(1)

    def pi_power(self, s: int) -> "RamifiedPadic":
        if s < 0:
            raise ArgumentError("negative pi powers are elements of the fraction field")
        wraps, r = divmod(s, self.e)
        coeffs = [self.w_zero() for _ in range(self.e)]
        coeffs[r] = self.w_from_int((-self.p) ** wraps)
        return RamifiedPadic(self, tuple(coeffs))

    def from_w(self, w) -> "RamifiedPadic":
        coeffs = [self.w_zero() for _ in range(self.e)]
        coeffs[0] = tuple(int(c) % self.pK for c in w)
        return RamifiedPadic(self, tuple(coeffs))


@dataclass(frozen=True, eq=False)
class RamifiedPadic:
    ctx: RamifiedContext
    coeffs: tuple[tuple[int, ...], ...]  # pi-degree major, W-coordinate minor

    def __add__(self, other: "RamifiedPadic") -> "RamifiedPadic":
        c = self.ctx
        return RamifiedPadic(c, tuple(c.w_add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "RamifiedPadic") -> "RamifiedPadic":
        c = self.ctx
        return RamifiedPadic(c, tuple(c.w_sub(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "RamifiedPadic":
        c = self.ctx
        return RamifiedPadic(c, tuple(c.w_scale(a, -1) for a in self.coeffs))

    def scale_int(self, k: int) -> "RamifiedPadic":
        c = self.ctx
        return RamifiedPadic(c, tuple(c.w_scale(a, k) for a in self.coeffs))

    def __mul__(self, other: "RamifiedPadic") -> "RamifiedPadic":
        c = self.ctx
        e = c.e
        tmp = [c.w_zero() for _ in range(2 * e - 1)]
        for i, a in enumerate(self.coeffs):
            if any(a):
                for j, b in enumerate(other.coeffs):
                    if any(b):
                        tmp[i + j] = c.w_add(tmp[i + j], c.w_mul(a, b))
        # fold pi^(e + r) = -p * pi^r
        for d in range(2 * e - 2, e - 1, -1):
            w = tmp[d]
            if any(w):
                tmp[d - e] = c.w_add(tmp[d - e], c.w_scale(w, -c.p))
        return RamifiedPadic(c, tuple(tmp[:e]))

    def __pow__(self, k: int) -> "RamifiedPadic":
        out = self.ctx.one()
        acc = self
        while k:
            if k & 1:
                out = out * acc
            acc = acc * acc
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, RamifiedPadic):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return all(not any(w) for w in self.coeffs)

    # -- valuation ----------------------------------------------------------

    def valuation(self) -> int | None:
        """pi-adic valuation, or None when the truncation reads >= the floor."""
        c = self.ctx
        best = None
        for i, w in enumerate(self.coeffs):
            vw = c.K
            for coord in w:
                if coord:
                    v = 0
                    x = coord
                    while x % c.p == 0:
                        v += 1
                        x //= c.p
                    vw = min(vw, v)
            if vw < c.K:
                cand = (c.p - 1) * vw + i
                if best is None or cand < best:
                    best = cand
        if best is None or best >= c.prec_floor:
            return None
        return best

    def residue(self) -> tuple[int, ...]:
        """Reduction mod pi: the constant pi-coefficient mod p (an F_{p^n} vector)."""
        return tuple(x % self.ctx.p for x in self.coeffs[0])

    # -- division -----------------------------------------------------------

    def div_by_pi(self) -> "RamifiedPadic":
        c = self.ctx
        if any(x % c.p for x in self.coeffs[0]):
            raise ArgumentError("element has valuation 0; cannot divide by pi")
        out = list(self.coeffs[1:])
        out.append(tuple((-(x // c.p)) % c.pK for x in self.coeffs[0]))
        return RamifiedPadic(c, tuple(out))

    def div_by_pi_power(self, s: int) -> "RamifiedPadic":
        out = self
        for _ in range(s):
            out = out.div_by_pi()
        return out

    def inverse_unit(self) -> "RamifiedPadic":
        """Inverse of a unit (valuation 0) by residue inversion + Hensel."""
        c = self.ctx
        res = self.residue()
        if not any(res):
            raise ArgumentError("not a unit: zero residue")
        y = c.from_w(_residue_field_inverse(res, c.p, c.modulus, c.n))
        two = c.from_int(2)
        steps = max(1, (c.prec_floor).bit_length() + 1)
        for _ in range(steps):
            y = y * (two - self * y)
        return y

    def divide(self, other: "RamifiedPadic") -> "RamifiedPadic":
        """Exact division; v(other) must not exceed v(self)."""
        v = other.valuation()
        if v is None:
            raise PrecisionError("divisor vanishes at working precision")
        unit = other.div_by_pi_power(v)
        return (self * unit.inverse_unit()).div_by_pi_power(v)


def _residue_field_inverse(vec, p, modulus, n) -> tuple[int, ...]:
    """Inverse in F_p[x]/(modulus) by extended Euclid."""

    def trim(a):
        while a and a[-1] == 0:
            a.pop()
        return a

    def pdiv(a, b):
        a = a[:]
        binv = pow(b[-1], p - 2, p) if p > 2 else 1
        q = [0] * max(len(a) - len(b) + 1, 0)
        while len(a) >= len(b) and trim(a):
            if not a:
                break
            c = a[-1] * binv % p
            d = len(a) - len(b)
            q[d] = c
            for i in range(len(b)):
                a[d + i] = (a[d + i] - c * b[i]) % p
            trim(a)
        return q, a

    r0, r1 = [c % p for c in modulus], trim([c % p for c in vec])
    s0, s1 = [], [1]
    while r1:
        q, r2 = pdiv(r0, r1)
        # s2 = s0 - q*s1
        s2 = s0[:] + [0] * max(0, len(q) + len(s1) - 1 - len(s0))
        for i, qc in enumerate(q):
            if qc:
                for j, sc in enumerate(s1):
                    s2[i + j] = (s2[i + j] - qc * sc) % p
        r0, r1, s0, s1 = r1, trim(r2), s1, trim(s2)
    if len(r0) != 1:
        raise ArgumentError("element is not invertible in the residue field")
    lead_inv = pow(r0[0], p - 2, p) if p > 2 else 1
    out = [c * lead_inv % p for c in s0]
    out += [0] * (n - len(out))
    return tuple(out[:n])


# ---------------------------------------------------------------------------
# canonical lifts


def teichmuller(ctx: RamifiedContext, residue_vec) -> RamifiedPadic:
    """The unique root of x^(p^n) = x lifting the residue (zero excluded)."""
    if not any(int(c) % ctx.p for c in residue_vec):
        raise ArgumentError("Teichmueller lift of zero is not defined")
    y = tuple(int(c) % ctx.pK for c in residue_vec)
    q = ctx.p**ctx.n
    for _ in range(ctx.K + 3):
        y2 = ctx.w_pow(y, q)
        if y2 == y:
            break
        y = y2
    else:  # pragma: no cover
        raise PrecisionError("Teichmueller iteration did not stabilize")
    return ctx.from_w(y)


def zeta_p_lift(ctx: RamifiedContext) -> RamifiedPadic:
    """The p-th root of unity with zeta_p = 1 + pi mod pi^2 (Dwork pinning).

    Newton runs in a padded-precision context (pi-divisions cost one p-digit
    of the top coordinate each) until Phi_p vanishes exactly in truncation;
    the result reduced mod p^K is then an exact truncated root.
    """
    p = ctx.p
    if p == 2:
        return ctx.from_int(-1)
    pad = RamifiedContext(p, ctx.n, ctx.modulus, ctx.K + 8)
    x = pad.one() + pad.pi_power(1)

    def phi_and_derivative(z):
        der = pad.zero()
        val = pad.one()
        for i in range(1, p):
            der = der + val.scale_int(i)
            val = val * z
        phi = pad.one()
        acc = z
        for _ in range(1, p):
            phi = phi + acc
            acc = acc * z
        return phi, der

    for _ in range(4 * pad.K + 16):
        phi, der = phi_and_derivative(x)
        if all(c % ctx.pK == 0 for w in phi.coeffs for c in w):
            # Phi vanishes mod p^K, so x truncated to p^K is an exact root there
            coeffs = tuple(tuple(c % ctx.pK for c in w) for w in x.coeffs)
            return RamifiedPadic(ctx, coeffs)
        x = x - phi.divide(der)
    raise PrecisionError("Newton iteration for zeta_p did not converge")  # pragma: no cover


# ---------------------------------------------------------------------------
# embedding Z[zeta_m] -> the ramified ring


class PadicEmbedding:
    """Ring morphism zeta_{p^n-1} -> teich(g), zeta_p -> Dwork zeta_p.

    Realizes the choice of prime over p: its kernel is reduction mod pi.
    Prime-base towers only (q = p).
    """

    def __init__(self, tower: FieldTower, K: int | None = None):
        if tower.f != 1:
            raise ArgumentError("p-adic embedding requires a prime base field (f = 1)")
        self.tower = tower
        p, n, N = tower.p, tower.n, tower.mult_order
        if K is None:
            K = n * (p - 1) + 8
        self.ctx = RamifiedContext(p, n, tower.modulus, K)
        self.teich_g = teichmuller(self.ctx, tower.exp_vec[1].astype(int))
        self.zeta_p = zeta_p_lift(self.ctx)
        # zeta_m = zeta_p^a * zeta_N^b with a*N + b*p = 1 mod m
        self.m = p * N
        a = pow(N, -1, p)
        b = pow(p, -1, N)
        self.img_zeta_m = (self.zeta_p**a) * (self.teich_g**b)
        self._pows: list[RamifiedPadic] | None = None

    def _img_pows(self, upto: int) -> list[RamifiedPadic]:
        if self._pows is None or len(self._pows) < upto:
            pows = [self.ctx.one()]
            while len(pows) < upto:
                pows.append(pows[-1] * self.img_zeta_m)
            self._pows = pows
        return self._pows

    def embed(self, elt: CycloElement) -> RamifiedPadic:
        if elt.ring.m != self.m:
            raise ArgumentError(
                f"conductor {elt.ring.m} does not match the embedding conductor {self.m}"
            )
        pows = self._img_pows(elt.ring.phi)
        out = self.ctx.zero()
        for k, c in enumerate(elt.coeffs):
            c = int(c)
            if c:
                out = out + pows[k].scale_int(c)
        return out

    def valuation(self, elt: CycloElement) -> int | None:
        return self.embed(elt).valuation()


_EMBED_CACHE: dict[tuple[int, int], tuple[FieldTower, PadicEmbedding]] = {}


def embedding_for(tower: FieldTower, K: int | None = None) -> PadicEmbedding:
    key = (id(tower), K if K is not None else -1)
    hit = _EMBED_CACHE.get(key)
    if hit is not None and hit[0] is tower:
        return hit[1]
    emb = PadicEmbedding(tower, K)
    _EMBED_CACHE[key] = (tower, emb)
    return emb


# ---------------------------------------------------------------------------
# theorem verifiers


@dataclass(frozen=True)
class StickelbergerReport:
    p: int
    n: int
    e: int
    s: int
    measured_valuation: int | None
    valuation_ok: bool
    congruence_ok: bool

    @property
    def ok(self) -> bool:
        return self.valuation_ok and self.congruence_ok


def stickelberger_check(tower: FieldTower, e: int, K: int | None = None) -> StickelbergerReport:
    """ord_P S(omega^{-e}) = s(e) and S(omega^{-e}) * t(e) / (zeta_p-1)^s(e) = -1 mod pi."""
    p, n, N = tower.p, tower.n, tower.mult_order
    e %= N
    if e == 0:
        raise ArgumentError("Stickelberger check needs a nontrivial character (e != 0)")
    v = digits.expand(p, n, e)
    s = digits.digit_sum(v)
    t = digits.digit_factorial_mod_p(v)
    emb = embedding_for(tower, K)
    x = emb.embed(gauss_S(MultChar(tower, -e)))
    mv = x.valuation()
    valuation_ok = mv == s
    congruence_ok = False
    if valuation_ok:
        pi_unit = emb.zeta_p - emb.ctx.one()  # valuation exactly 1
        y = x.divide(pi_unit**s).scale_int(t)
        res = y.residue()
        congruence_ok = res == ((p - 1,) + (0,) * (n - 1))
    return StickelbergerReport(
        p=p, n=n, e=e, s=s, measured_valuation=mv,
        valuation_ok=valuation_ok, congruence_ok=congruence_ok,
    )


@dataclass(frozen=True)
class GrossKoblitzReport:
    p: int
    n: int
    e: int
    window: int
    gamma_digit_route: int
    gamma_direct_route: int
    routes_agree: bool
    valuation_ok: bool
    identity_ok: bool

    @property
    def ok(self) -> bool:
        return self.routes_agree and self.valuation_ok and self.identity_ok


def gross_koblitz_check(tower: FieldTower, e: int, window: int = 1, K: int | None = None) -> GrossKoblitzReport:
    """S(omega^e) = (-1)^n p^n pi^(-s(e)) prod_i Gamma_p(1 - <p^i e/(p^n-1)>),
    compared mod p^(window+1) after clearing the common p^n scale, with the
    Gamma product evaluated independently by the digit-window formula and by
    the direct integer product definition.
    """
    p, n, N = tower.p, tower.n, tower.mult_order
    e %= N
    if e == 0:
        raise ArgumentError("Gross-Koblitz needs a nontrivial character (e != 0)")
    if p == 2 and window > 0:
        # Gamma_2 is not 1-Lipschitz: x = y mod 4 does not force
        # Gamma_2(x) = Gamma_2(y) mod 4, so the window routes only certify mod 2.
        raise ArgumentError("for p = 2 the comparison is only valid at window 0")
    if K is None:
        K = n * (p - 1) + window + 8
    v = digits.expand(p, n, e)
    s = digits.digit_sum(v)
    mod = p ** (window + 1)

    prod_digit = 1
    for i in range(1, n + 1):
        prod_digit = prod_digit * digits.padic_gamma_window(i, v, window) % mod
    prod_direct = 1
    for i in range(n):
        r = pow(p, i, N) * e % N
        x_int = (N - r) * pow(N, -1, mod) % mod
        prod_direct = prod_direct * digits.padic_gamma_int(x_int, p, mod) % mod
    routes_agree = prod_digit == prod_direct

    emb = embedding_for(tower, K)
    x = emb.embed(gauss_S(MultChar(tower, e)))
    valuation_ok = x.valuation() == n * (p - 1) - s

    identity_ok = False
    if valuation_ok:
        # under the Dwork pinning the exact identity is
        #   S(omega^e) * pi^s(e) = -pi^(n(p-1)) * prod_i Gamma_p(1 - <p^i e/N>)
        # (the global sign is part of the pinning, not n-dependent)
        u = x * emb.ctx.pi_power(s)
        w = -u.div_by_pi_power(n * (p - 1))
        head = w.coeffs[0]
        tail_ok = all(
            all(c % mod == 0 for c in w.coeffs[i]) for i in range(1, emb.ctx.e)
        )
        head_ok = head[0] % mod == prod_digit % mod and all(
            c % mod == 0 for c in head[1:]
        )
        identity_ok = head_ok and tail_ok
    return GrossKoblitzReport(
        p=p, n=n, e=e, window=window,
        gamma_digit_route=prod_digit, gamma_direct_route=prod_direct,
        routes_agree=routes_agree, valuation_ok=valuation_ok, identity_ok=identity_ok,
    )
