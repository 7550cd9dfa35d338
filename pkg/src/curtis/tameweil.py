"""Representations of the two-generator group <sigma, Fr : Fr sigma Fr^-1 = sigma^q>
whose sigma-image has ell-power order.

At desk scale sigma has order dividing ell^A, where A caps the ell-adic depth
v_ell(q^d - 1) over the degrees d in play.  Irreducible such representations
are induced characters: a q-power orbit of inertia exponents mod ell^A
together with the value of the inducing character on Fr^m (m the orbit size).
Semisimple representations are multisets of these.

The metacyclic oracle validates the induction/decomposition combinatorics by
honest finite-group character theory on an explicit metacyclic quotient,
through subgroup inner products evaluated by exact integer transforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coeffring import Cyc, euler_phi, lcm_all, root_of_unity_order
from .util import GuardExceeded, is_prime, multiplicative_order, prime_power_base


@dataclass(frozen=True)
class TameParams:
    """The arithmetic frame: primes ell != p, q a power of p, and a degree cap.

    Derived data: the order e of q mod ell, the depth map d -> v_ell(q^d - 1),
    the global depth cap A over d <= n_max, and the relevant degree list
    {1, e, ell*e, ell^2*e, ...} intersected with [1, n_max].
    """

    ell: int
    q: int
    n_max: int
    order_of_q: int = field(init=False)
    depth_cap: int = field(init=False)
    torsion_modulus: int = field(init=False)
    relevant_degrees: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if not is_prime(self.ell):
            raise ValueError(f"ell = {self.ell} is not prime")
        p = prime_power_base(self.q)
        if p is None:
            raise ValueError(f"q = {self.q} is not a prime power")
        if p == self.ell:
            raise ValueError("q must be prime to ell")
        if self.n_max < 1:
            raise ValueError("n_max must be positive")
        object.__setattr__(self, "order_of_q", multiplicative_order(self.q, self.ell))
        cap = max(self.depth(d) for d in range(1, self.n_max + 1))
        object.__setattr__(self, "depth_cap", cap)
        object.__setattr__(self, "torsion_modulus", self.ell ** cap)
        e = self.order_of_q
        rel = [1]
        d = e
        while d <= self.n_max:
            if d != 1:
                rel.append(d)
            d *= self.ell
        object.__setattr__(self, "relevant_degrees", tuple(rel))

    def depth(self, d: int) -> int:
        """v_ell(q^d - 1)."""
        v = 0
        m = self.q ** d - 1
        while m % self.ell == 0:
            m //= self.ell
            v += 1
        return v

    def is_relevant(self, d: int) -> bool:
        return d in self.relevant_degrees

    def largest_relevant_divisor(self, d: int) -> int:
        return max(m for m in self.relevant_degrees if d % m == 0)


@dataclass(frozen=True)
class ModeConfig:
    """Normalisation mode.

    `rectified` twists every degree-d induction by the unramified sign
    (-1)^(d-1); `plain` is literal induction.  The rectified mode is the one
    under which the scalar-uniformiser unit is coherent and det Fr maps onto
    it; plain mode is retained to exhibit the sign discrepancy.
    """

    name: str

    def __post_init__(self):
        if self.name not in ("rectified", "plain"):
            raise ValueError(f"unknown mode {self.name!r}")

    def sign(self, d: int) -> int:
        if self.name == "plain":
            return 1
        return -1 if d % 2 == 0 else 1


RECTIFIED = ModeConfig("rectified")
PLAIN = ModeConfig("plain")


@dataclass(frozen=True)
class InertiaOrbit:
    """q-power orbit of an inertia exponent mod ell^A; rep is the orbit minimum."""

    rep: int
    size: int
    modulus: int

    def members(self, q: int) -> list[int]:
        out = [self.rep]
        c = self.rep * q % self.modulus
        while c != self.rep:
            out.append(c)
            c = c * q % self.modulus
        assert len(out) == self.size
        return out


def orbit_of(params: TameParams, c: int) -> InertiaOrbit:
    mod = params.torsion_modulus
    c %= mod
    members = {c}
    x = c * params.q % mod
    while x != c:
        members.add(x)
        x = x * params.q % mod
    return InertiaOrbit(rep=min(members), size=len(members), modulus=mod)


class IrrRep:
    """Irreducible: induced from the inertia orbit with Fr^m-value phi != 0.

    The dimension equals the orbit size; (orbit, phi) is a complete
    isomorphism invariant.
    """

    __slots__ = ("orbit", "phi", "_key")

    def __init__(self, orbit: InertiaOrbit, phi: Cyc):
        if phi.is_zero():
            raise ValueError("Frobenius value must be nonzero")
        self.orbit = orbit
        self.phi = phi
        self._key = (orbit.rep, orbit.size, orbit.modulus, phi.min_key())

    @property
    def dim(self) -> int:
        return self.orbit.size

    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, IrrRep) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"IrrRep(c={self.orbit.rep} mod {self.orbit.modulus}, m={self.orbit.size}, phi={self.phi!r})"


class SSRep:
    """Semisimple representation: a multiset of IrrRep pieces."""

    __slots__ = ("pieces", "n")

    def __init__(self, pieces):
        self.pieces = tuple(sorted(pieces, key=lambda r: r.key()))
        self.n = sum(p.dim for p in self.pieces)

    def key(self):
        return tuple(p.key() for p in self.pieces)

    def __eq__(self, other):
        return isinstance(other, SSRep) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"SSRep(n={self.n}, {list(self.pieces)!r})"


def induce_factor(params: TameParams, d: int, c: int, alpha: Cyc, mode: ModeConfig) -> list[IrrRep]:
    """Decompose the degree-d induction of the character (c, alpha).

    c is a global inertia exponent mod ell^A whose orbit size m must divide d;
    the result is the d/m pieces IrrRep(orbit(c), beta) with
    beta^(d/m) = sign(d) * alpha.
    """
    from .coeffring import kth_roots

    orbit = orbit_of(params, c)
    m = orbit.size
    assert d % m == 0, f"orbit size {m} does not divide degree {d}"
    j = d // m
    target = alpha * mode.sign(d)
    betas = kth_roots(target, j)
    return [IrrRep(orbit, beta) for beta in betas]


def rho_of_factors(params: TameParams, factors, mode: ModeConfig) -> SSRep:
    """Semisimple rep attached to factor data [(degree, global exponent, alpha)]."""
    pieces = []
    for d, c, alpha in factors:
        pieces.extend(induce_factor(params, d, c, alpha, mode))
    return SSRep(pieces)


def rho_of(torus, theta, mode: ModeConfig) -> SSRep:
    """Semisimple rep attached to a torus character (see torusalg.Character)."""
    return rho_of_factors(torus.params, theta.global_factors(), mode)


def equivalent(torus1, theta1, torus2, theta2, mode: ModeConfig) -> bool:
    return rho_of(torus1, theta1, mode) == rho_of(torus2, theta2, mode)


def trace_at(params: TameParams, rep: SSRep, word: tuple[int, int]) -> Cyc:
    """Trace of the representation at the normal-form word sigma^e Fr^f.

    A piece of orbit size m contributes nothing unless m | f, else
    phi^(f/m) * sum_j zeta^(c q^j e) over the orbit.
    """
    e, f = word
    mod = params.torsion_modulus
    conductor = lcm_all([mod] + [p.phi.conductor for p in rep.pieces] + [1])
    total = Cyc.zero(conductor)
    for piece in rep.pieces:
        m = piece.orbit.size
        if f % m != 0:
            continue
        frob = piece.phi ** (f // m)
        for c in piece.orbit.members(params.q):
            total = total + frob * Cyc.root_of_unity(mod, c * e, conductor)
    return total


def normalize_word(letters, params: TameParams) -> tuple[int, int]:
    """Normal form sigma^e Fr^f of a word given as [(gen, exponent), ...].

    gen is "s" or "f"; uses Fr sigma Fr^-1 = sigma^q to push sigma left.
    """
    mod = params.torsion_modulus
    e, f = 0, 0
    for gen, k in letters:
        if gen == "s":
            # sigma^e Fr^f sigma^k = sigma^(e + k q^f) Fr^f
            qf = pow(params.q, f, mod) if mod > 1 else 0
            e = (e + k * qf) % mod
        elif gen == "f":
            f += k
        else:
            raise ValueError(f"unknown generator {gen!r}")
    return e % mod, f


def irrep_matrices(params: TameParams, piece: IrrRep, conductor: int):
    """Explicit matrices (Fr, sigma) of the induced model, over Q(zeta_conductor).

    Basis e_0..e_{m-1}; sigma is diagonal with the orbit exponents, Fr shifts
    e_i -> e_{i-1} with Fr^m = phi.  Satisfies Fr sigma Fr^-1 = sigma^q.
    """
    m = piece.orbit.size
    mod = params.torsion_modulus
    zero = Cyc.zero(conductor)
    phi = piece.phi.embed(conductor) if piece.phi.conductor != conductor else piece.phi
    sigma = [[zero] * m for _ in range(m)]
    members = []
    c = piece.orbit.rep
    for i in range(m):
        members.append(c)
        c = c * params.q % mod
    for i in range(m):
        sigma[i][i] = Cyc.root_of_unity(mod, members[i], conductor)
    fr = [[zero] * m for _ in range(m)]
    one = Cyc.one(conductor)
    for i in range(1, m):
        fr[i - 1][i] = one
    fr[m - 1][0] = phi
    return fr, sigma


# -- metacyclic oracle --------------------------------------------------------


def metacyclic_oracle(
    params: TameParams,
    d: int,
    c: int,
    alpha: Cyc,
    order_bound: int | None = None,
    mode: ModeConfig = PLAIN,
    group_order_guard: int = 10 ** 6,
) -> list[IrrRep]:
    """Brute-force validator for induce_factor via finite-group character theory.

    Builds the metacyclic group G = <s, f : s^(ell^A) = 1, f s f^-1 = s^q,
    f^D = 1> with D chosen so the inducing character factors through G,
    induces the character (c, alpha) from <s, f^d>, and decomposes it by
    inner products against every candidate induced character from <s, f^m>
    (m the inertia orbit size), computed on the subgroup by exact integer
    transforms.  Rectified mode is obtained by pre-twisting alpha.
    """
    if mode.name != "plain":
        return metacyclic_oracle(
            params, d, c, alpha * mode.sign(d), order_bound, PLAIN, group_order_guard
        )
    la = params.torsion_modulus
    orbit = orbit_of(params, c)
    m = orbit.size
    assert d % m == 0
    n_alpha = root_of_unity_order(alpha)
    if n_alpha is None:
        raise ValueError("oracle requires alpha of finite order")
    if order_bound is not None and order_bound % n_alpha != 0:
        raise ValueError("order bound does not contain ord(alpha)")
    n_use = order_bound or n_alpha
    order_q = multiplicative_order(params.q, la)
    big_d = lcm_all([d * n_use, order_q])
    if la * big_d > group_order_guard:
        raise GuardExceeded(f"metacyclic group order {la * big_d} exceeds guard")

    conductor = lcm_all([la, big_d, 2, alpha.conductor])
    exp_alpha = _zeta_exponent(alpha, conductor)

    q_inv = pow(params.q, -1, la) if la > 1 else 0
    dm = big_d // m  # order of f^m in G / <s>
    size_gm = la * dm

    # psi(s^j f^(m k)) as exponent lists; zero unless d | m*k
    unit = conductor // la if la > 1 else 0
    t_matrix = np.zeros((dm, conductor), dtype=np.int64)
    for k in range(dm):
        if (m * k) % d != 0:
            continue
        alpha_part = exp_alpha * ((m * k) // d)
        # x = f^i conjugates: s^j -> s^(j q^-i)
        qi = 1
        base_exps = []
        for _ in range(d):
            base_exps.append(qi)
            qi = qi * q_inv % la if la > 1 else 0
        for j in range(la):
            # chi-value exponents for each fixed coset, times zeta^(-c j)
            tw = (-c * j) % la * unit if la > 1 else 0
            for b in base_exps:
                expo = ((c * j * b) % la) * unit if la > 1 else 0
                t_matrix[k, (expo + alpha_part + tw) % conductor] += 1

    # candidate multiplicities: A[b] = sum_k T(k) * beta^(-k), beta = zeta^(b*step)
    step = conductor // dm
    acc = np.zeros((dm, conductor), dtype=np.int64)
    for k in range(dm):
        row = t_matrix[k]
        if not row.any():
            continue
        for b in range(dm):
            shift = (-b * k * step) % conductor
            acc[b] += np.roll(row, shift)

    red = _reduction_matrix(conductor)
    reduced = acc @ red  # shape (dm, phi_deg)
    out: list[IrrRep] = []
    for b in range(dm):
        row = reduced[b]
        if np.any(row[1:] != 0):
            raise AssertionError("non-integral inner product in oracle")
        val = int(row[0])
        if val % size_gm != 0:
            raise AssertionError("non-integral multiplicity in oracle")
        mult = val // size_gm
        if mult < 0 or mult > 1:
            raise AssertionError(f"unexpected multiplicity {mult}")
        if mult == 1:
            beta = Cyc.zeta(conductor, b * step)
            out.append(IrrRep(orbit, beta))
    assert sum(p.dim for p in out) == d, "dimension mismatch in oracle decomposition"
    return out


def _zeta_exponent(x: Cyc, conductor: int) -> int:
    """Exponent k with x = zeta_conductor^k (conductor even)."""
    y = x.embed(conductor) if x.conductor != conductor else x
    acc = Cyc.one(conductor)
    z = Cyc.zeta(conductor)
    for k in range(conductor):
        if acc == y:
            return k
        acc = acc * z
    raise ValueError("element is not a power of zeta")


_REDUCTION_CACHE: dict[int, np.ndarray] = {}


def _reduction_matrix(conductor: int) -> np.ndarray:
    """Rows: x^e mod Phi_conductor, for e < conductor."""
    mat = _REDUCTION_CACHE.get(conductor)
    if mat is None:
        phi = euler_phi(conductor)
        rows = []
        for e in range(conductor):
            vec = [0] * e + [1]
            red = Cyc(conductor, vec)
            assert red.den == 1
            rows.append(list(red.num))
        mat = np.array(rows, dtype=np.int64)
        _REDUCTION_CACHE[conductor] = mat
    return mat


# -- enumeration ---------------------------------------------------------------


def all_orbits(params: TameParams, max_size: int | None = None) -> list[InertiaOrbit]:
    """All q-power orbits mod ell^A, optionally capped by size, sorted by rep."""
    mod = params.torsion_modulus
    seen = set()
    out = []
    for c in range(mod):
        if c in seen:
            continue
        orb = orbit_of(params, c)
        seen.update(orb.members(params.q))
        if max_size is None or orb.size <= max_size:
            out.append(orb)
    return sorted(out, key=lambda o: (o.size, o.rep))


def count_ssreps(params: TameParams, n: int, value_modulus: int) -> int:
    """Number of semisimple reps of dimension n with Fr-values in mu_N."""
    orbits = all_orbits(params, max_size=n)
    sizes = [o.size for o in orbits for _ in range(value_modulus)]
    # multiset knapsack: item types with unbounded multiplicity
    counts = [1] + [0] * n
    for s in sizes:
        for total in range(s, n + 1):
            counts[total] += counts[total - s]
    return counts[n]


def enumerate_ssreps(
    params: TameParams,
    n: int,
    value_modulus: int,
    conductor: int | None = None,
    guard: int = 200_000,
) -> list[SSRep]:
    """All semisimple reps of dimension n with Frobenius values in mu_N.

    Distinct multisets only; the count is estimated first and guarded.
    """
    count = count_ssreps(params, n, value_modulus)
    if count > guard:
        raise GuardExceeded(f"{count} semisimple reps exceeds guard {guard}")
    if conductor is None:
        conductor = lcm_all([value_modulus, 2])
    orbits = all_orbits(params, max_size=n)
    alphabet = [
        (orb, Cyc.root_of_unity(value_modulus, t, conductor))
        for orb in orbits
        for t in range(value_modulus)
    ]
    out: list[SSRep] = []

    def rec(remaining: int, start: int, acc: list[IrrRep]):
        if remaining == 0:
            out.append(SSRep(list(acc)))
            return
        for i in range(start, len(alphabet)):
            orb, phi = alphabet[i]
            if orb.size <= remaining:
                acc.append(IrrRep(orb, phi))
                rec(remaining - orb.size, i, acc)
                acc.pop()

    rec(n, 0, [])
    assert len(out) == count
    return out
