"""GL2(F_q) oracle: cuspidal characters, Bessel functions, gamma factors.

Everything here is independent of the Gauss-sum machinery except the shared
cyclotomic ring, so the exact agreement of `gamma_via_bessel` with
`gauss.gamma_n_by_1` is a genuine two-route check of the n x 1 gamma-factor
formula at n = 2.

The cuspidal character values are an external classical input (the q - 1
dimensional discrete series attached to a regular character chi of
F_{q^2}^x):

    chi_pi(z I)              = (q-1) chi(z)
    chi_pi(z * unipotent)    = -chi(z)
    chi_pi(diag(a,b), a!=b)  = 0
    chi_pi(elliptic t)       = -(chi(t) + chi(t)^q)

Because this table is imported knowledge, a constructed character is gated
before use: dimension, unit self-inner-product, orthogonality to the
trivial character and to every Borel-induced character (cuspidality).  A
wrong table cannot silently poison the cross-check; it raises
FormulaValidationError.

q is restricted to odd primes (default cap 7): conjugacy classes of 2x2
matrices are resolved by the discriminant of the characteristic polynomial,
and group sums stay exhaustive and exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chars import MultChar, ring_for
from .cyclo import CycloElement
from .errors import ArgumentError, FormulaValidationError, ResourceCapError
from .ff import FieldTower, build_tower
from .gauss import ScaledCyclo
from .numth import is_prime

DEFAULT_MAX_Q = 7


@dataclass(frozen=True)
class GL2Class:
    """One conjugacy class of GL2(F_q)."""

    label: str  # "central" | "central-unipotent" | "split" | "elliptic"
    params: tuple  # (z,) | (z,) | (a, b) with a < b | (dlog t,)
    size: int


class GL2Group:
    """Conjugacy data of GL2(F_q) for odd prime q, with class lookup by
    (trace, det) and the quadratic-residue table of F_q."""

    def __init__(self, q: int, max_q: int = DEFAULT_MAX_Q):
        if not is_prime(q) or q == 2:
            raise ArgumentError(f"GL2 oracle needs an odd prime q, got {q}")
        if q > max_q:
            raise ResourceCapError(f"q = {q} exceeds the GL2 cap max_q = {max_q}")
        self.q = q
        self.tower = build_tower(q, 1, 2)
        self.order = (q * q - 1) * (q * q - q)
        self.classes: list[GL2Class] = []
        for z in range(1, q):
            self.classes.append(GL2Class("central", (z,), 1))
        for z in range(1, q):
            self.classes.append(GL2Class("central-unipotent", (z,), q * q - 1))
        for a in range(1, q):
            for b in range(a + 1, q):
                self.classes.append(GL2Class("split", (a, b), q * (q + 1)))
        N = self.tower.mult_order
        elliptic_seen = set()
        self._elliptic_by_trdet: dict[tuple[int, int], int] = {}
        for d in range(1, N):
            if d % (q + 1) == 0:  # t lies in F_q
                continue
            if d in elliptic_seen:
                continue
            dq = d * q % N
            elliptic_seen.update({d, dq})
            t = self.tower.exp(d)
            tr = self.tower.add(t, self.tower.frobenius(t))
            det = self.tower.exp(d * (q + 1))
            self.classes.append(GL2Class("elliptic", (d,), q * q - q))
            self._elliptic_by_trdet[(tr, det)] = d
        assert len(self.classes) == q * q - 1
        assert sum(c.size for c in self.classes) == self.order
        self._sqrt = {x * x % q: x for x in range(q)}
        self._index = {c: i for i, c in enumerate(self.classes)}
        # base-field discrete logs against h = Nr(g), the pinned generator
        h = self.tower.norm_rel(self.tower.g, 1)
        self.h = h
        self._dlog_base = {}
        acc = 1
        for i in range(q - 1):
            self._dlog_base[acc] = i
            acc = acc * h % q
        self.ring = ring_for(self.tower)

    def class_of(self, mat: tuple[int, int, int, int]) -> GL2Class:
        """Conjugacy class of (a, b, c, d) = [[a, b], [c, d]] over Z/q."""
        q = self.q
        a, b, c, d = (x % q for x in mat)
        det = (a * d - b * c) % q
        if det == 0:
            raise ArgumentError("matrix is singular")
        tr = (a + d) % q
        disc = (tr * tr - 4 * det) % q
        if disc == 0:
            z = tr * pow(2, q - 2, q) % q
            if b == 0 and c == 0 and a == d:
                return self.classes[self._index_of("central", (z,))]
            return self.classes[self._index_of("central-unipotent", (z,))]
        if disc in self._sqrt:
            s = self._sqrt[disc]
            inv2 = pow(2, q - 2, q)
            x, y = (tr + s) * inv2 % q, (tr - s) * inv2 % q
            return self.classes[self._index_of("split", (min(x, y), max(x, y)))]
        dlog = self._elliptic_by_trdet[(tr, det)]
        return self.classes[self._index_of("elliptic", (dlog,))]

    def _index_of(self, label: str, params: tuple) -> int:
        for i, c in enumerate(self.classes):
            if c.label == label and c.params == params:
                return i
        raise ArgumentError(f"no class {label} {params}")  # pragma: no cover

    def psi(self, x: int) -> CycloElement:
        """Additive character value zeta_q^x in the shared ring."""
        return self.ring.zeta_pow(self.tower.mult_order * (x % self.q))

    def tau(self, k: int, a: int) -> CycloElement:
        """k-th multiplicative character of F_q^x against the generator h."""
        N = self.tower.mult_order
        return self.ring.zeta_pow(self.q * (N // (self.q - 1)) * k * self._dlog_base[a % self.q])


_GROUP_CACHE: dict[int, GL2Group] = {}


def gl2_group(q: int, max_q: int = DEFAULT_MAX_Q) -> GL2Group:
    g = _GROUP_CACHE.get(q)
    if g is None:
        g = GL2Group(q, max_q=max_q)
        _GROUP_CACHE[q] = g
    return g


# ---------------------------------------------------------------------------
# cuspidal characters


class CuspidalCharacter:
    """Exact class function of the cuspidal representation attached to a
    regular character of F_{q^2}^x, validated on construction."""

    def __init__(self, group: GL2Group, chi: MultChar, validate: bool = True):
        if chi.tower is not group.tower:
            raise ArgumentError("character must live on the group's degree-2 tower")
        if not chi.is_regular():
            raise ArgumentError(f"exponent {chi.e} is not regular (chi = chi^q)")
        self.group = group
        self.chi = chi
        ring = group.ring
        q = group.q
        N = group.tower.mult_order

        def chi_at_dlog(d: int) -> CycloElement:
            return ring.zeta_pow(q * chi.e * d)

        # dlog of the base-field scalar z inside F_{q^2}
        zlog = {z: group.tower.dlog(z) for z in range(1, q)}
        self.values: list[CycloElement] = []
        for c in group.classes:
            if c.label == "central":
                self.values.append(chi_at_dlog(zlog[c.params[0]]).scale(q - 1))
            elif c.label == "central-unipotent":
                self.values.append(-chi_at_dlog(zlog[c.params[0]]))
            elif c.label == "split":
                self.values.append(ring.zero())
            else:
                d = c.params[0]
                self.values.append(-(chi_at_dlog(d) + chi_at_dlog(d * q % N)))
        if validate:
            self._validate()

    def value(self, cls: GL2Class) -> CycloElement:
        return self.values[self.group._index[cls]]

    def value_at(self, mat: tuple[int, int, int, int]) -> CycloElement:
        return self.value(self.group.class_of(mat))

    # -- validation gates ---------------------------------------------------

    def _inner(self, other_values: list[CycloElement]) -> CycloElement:
        """|G| times the inner product <self, other> (conjugating `other`)."""
        g = self.group
        acc = g.ring.zero()
        for c, mine, theirs in zip(g.classes, self.values, other_values):
            acc = acc + (mine * theirs.conj()).scale(c.size)
        return acc

    def _validate(self) -> None:
        g = self.group
        q = g.q
        dim = self.values[g._index_of("central", (1,))]
        if not (dim.is_integer() and dim.int_value() == q - 1):
            raise FormulaValidationError("dimension gate failed")
        norm = self._inner(self.values)
        if not (norm.is_integer() and norm.int_value() == g.order):
            raise FormulaValidationError("self-inner-product gate failed")
        triv = [g.ring.one() for _ in g.classes]
        if not self._inner(triv).is_zero():
            raise FormulaValidationError("orthogonality-to-trivial gate failed")
        for c1 in range(q - 1):
            for c2 in range(q - 1):
                ind = self._borel_induced(c1, c2)
                if not self._inner(ind).is_zero():
                    raise FormulaValidationError(
                        f"cuspidality gate failed against Borel character ({c1},{c2})"
                    )

    def _borel_induced(self, c1: int, c2: int) -> list[CycloElement]:
        """Character of Ind from the Borel of the torus character (c1, c2)."""
        g = self.group
        ring, q = g.ring, g.q

        def theta(k: int, a: int) -> CycloElement:
            return g.tau(k, a)

        out = []
        for c in g.classes:
            if c.label == "central":
                z = c.params[0]
                out.append((theta(c1, z) * theta(c2, z)).scale(q + 1))
            elif c.label == "central-unipotent":
                z = c.params[0]
                out.append(theta(c1, z) * theta(c2, z))
            elif c.label == "split":
                a, b = c.params
                out.append(theta(c1, a) * theta(c2, b) + theta(c1, b) * theta(c2, a))
            else:
                out.append(ring.zero())
        return out


# ---------------------------------------------------------------------------
# Bessel functions and gamma factors


@dataclass(frozen=True)
class BesselValue:
    """Exact q * B(g): the Bessel average has denominator q."""

    num: CycloElement

    def __eq__(self, other):
        if not isinstance(other, BesselValue):
            return NotImplemented
        return self.num == other.num

    def __hash__(self):
        return hash(self.num)


def bessel(pi: CuspidalCharacter, mat: tuple[int, int, int, int]) -> BesselValue:
    """B(g) = q^{-1} sum_x psi(-x) chi_pi(g * [[1, x], [0, 1]])."""
    g = pi.group
    q = g.q
    a, b, c, d = mat
    acc = g.ring.zero()
    for x in range(q):
        gu = (a, (a * x + b) % q, c, (c * x + d) % q)
        acc = acc + g.psi(-x) * pi.value_at(gu)
    return BesselValue(acc)


def bessel_at_identity(pi: CuspidalCharacter) -> BesselValue:
    return bessel(pi, (1, 0, 0, 1))


def gamma_via_bessel(pi: CuspidalCharacter, k: int) -> ScaledCyclo:
    """gamma(pi x tau_k, psi) = sum_a B_pi([[0,1],[a,0]]) tau_k(a) exactly."""
    g = pi.group
    q = g.q
    if not 0 <= k < q - 1:
        raise ArgumentError(f"twist index {k} outside [0, {q - 1})")
    acc = g.ring.zero()
    for a in range(1, q):
        acc = acc + bessel(pi, (0, 1, a, 0)).num * g.tau(k, a)
    return ScaledCyclo(acc, 1, q)


def bessel_vector(pi: CuspidalCharacter) -> tuple:
    """Restricted Bessel values (q*B on [[0,1],[a,0]], a in F_q^x), as keys."""
    return tuple(bessel(pi, (0, 1, a, 0)).num.key for a in range(1, pi.group.q))
