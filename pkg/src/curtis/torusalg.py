"""Group algebras of unramified maximal tori modulo prime-to-ell compacts.

A torus is a list of factor degrees (a partition of n, order kept positional).
The algebra attached to it is generated, per degree-d factor, by an invertible
uniformiser class Q and a torsion generator zeta of order ell^a(d); elements
are finitely supported maps from monomials (Q-exponents in Z, torsion
exponents in Z/ell^a(d)) to cyclotomic coefficients.

Characters pair a local inertia exponent (mod ell^a(d)) and a nonzero
Frobenius value with each factor; evaluation is the ring homomorphism sending
a monomial to prod alpha_i^(q-exp) * zeta^(c_i * torsion-exp).

The comparison map merges j equal factors of degree m into one factor of
degree n = j*m by zeta_i -> zeta, Q_i -> eta^i * Qhat with Qhat^j = s * Q; it
is pinned by its matched-evaluation property (tested, not assumed), and is
only well defined modulo the torsion ideal (zeta^(ell^a(m)) - 1) when the
depths differ, so the returned representative reduces torsion exponents to
that modulus.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .coeffring import Cyc, lcm_all
from .tameweil import (
    ModeConfig,
    SSRep,
    TameParams,
    induce_factor,
    orbit_of,
    rho_of_factors,
)


class NonInvariantError(ValueError):
    """Comparison map applied to an element whose image escapes the target ring."""


class TorusMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Torus:
    params: TameParams
    degrees: tuple[int, ...]

    def __post_init__(self):
        if not self.degrees or any(d < 1 for d in self.degrees):
            raise ValueError("degrees must be positive")
        if sum(self.degrees) > self.params.n_max:
            raise ValueError("torus dimension exceeds n_max of the parameters")

    @property
    def n(self) -> int:
        return sum(self.degrees)

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def torsion_moduli(self) -> tuple[int, ...]:
        ell = self.params.ell
        return tuple(ell ** self.params.depth(d) for d in self.degrees)

    def partition(self) -> tuple[int, ...]:
        return tuple(sorted(self.degrees, reverse=True))


@dataclass(frozen=True)
class Character:
    """One (local inertia exponent, Frobenius value) pair per torus factor."""

    torus: Torus
    pairs: tuple[tuple[int, Cyc], ...]

    def __post_init__(self):
        if len(self.pairs) != self.torus.rank:
            raise ValueError("character rank mismatch")
        moduli = self.torus.torsion_moduli()
        norm = []
        for (c, alpha), mod in zip(self.pairs, moduli):
            if alpha.is_zero():
                raise ValueError("Frobenius value must be nonzero")
            norm.append((c % mod, alpha))
        object.__setattr__(self, "pairs", tuple(norm))

    @property
    def params(self) -> TameParams:
        return self.torus.params

    def global_factors(self) -> list[tuple[int, int, Cyc]]:
        """Factor data (degree, global inertia exponent mod ell^A, alpha)."""
        out = []
        cap = self.params.torsion_modulus
        for d, (c, alpha), mod in zip(self.torus.degrees, self.pairs, self.torus.torsion_moduli()):
            out.append((d, c * (cap // mod) % cap, alpha))
        return out

    def twist_frobenius(self, slot: int) -> "Character":
        """Transport of the factor-slot Frobenius twist: c -> q*c, alpha fixed."""
        mod = self.torus.torsion_moduli()[slot]
        pairs = list(self.pairs)
        c, alpha = pairs[slot]
        pairs[slot] = (c * self.params.q % mod if mod > 1 else 0, alpha)
        return Character(self.torus, tuple(pairs))

    def permute(self, perm: Sequence[int]) -> "Character":
        """Character on the same torus with slots permuted (new[k] = old[perm[k]])."""
        degrees = self.torus.degrees
        if tuple(degrees[p] for p in perm) != degrees:
            raise TorusMismatchError("permutation does not preserve factor degrees")
        return Character(self.torus, tuple(self.pairs[p] for p in perm))


class TorusRingElem:
    """Finitely supported monomial-to-coefficient map, canonical form."""

    __slots__ = ("torus", "coeffs")

    def __init__(self, torus: Torus, coeffs: dict | None = None):
        self.torus = torus
        moduli = torus.torsion_moduli()
        canon: dict[tuple[tuple[int, ...], tuple[int, ...]], Cyc] = {}
        for (qexp, texp), coeff in (coeffs or {}).items():
            if isinstance(coeff, int):
                coeff = Cyc.integer(coeff)
            if coeff.is_zero():
                continue
            key = (
                tuple(qexp),
                tuple(t % m if m > 1 else 0 for t, m in zip(texp, moduli)),
            )
            prev = canon.get(key)
            total = coeff if prev is None else prev + coeff
            if total.is_zero():
                canon.pop(key, None)
            else:
                canon[key] = total
        self.coeffs = canon

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(torus: Torus) -> "TorusRingElem":
        return TorusRingElem(torus, {})

    @staticmethod
    def one(torus: Torus) -> "TorusRingElem":
        r = torus.rank
        return TorusRingElem(torus, {((0,) * r, (0,) * r): Cyc.one()})

    @staticmethod
    def monomial(torus: Torus, qexp: Sequence[int], texp: Sequence[int], coeff=1) -> "TorusRingElem":
        return TorusRingElem(torus, {(tuple(qexp), tuple(texp)): coeff})

    @staticmethod
    def q_gen(torus: Torus, slot: int, power: int = 1) -> "TorusRingElem":
        q = [0] * torus.rank
        q[slot] = power
        return TorusRingElem.monomial(torus, q, [0] * torus.rank)

    @staticmethod
    def torsion_gen(torus: Torus, slot: int, power: int = 1) -> "TorusRingElem":
        t = [0] * torus.rank
        t[slot] = power
        return TorusRingElem.monomial(torus, [0] * torus.rank, t)

    # -- ring structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "TorusRingElem"):
        if self.torus != other.torus:
            raise TorusMismatchError("elements live on different tori")

    def __add__(self, other):
        if isinstance(other, (int, Cyc)):
            other = TorusRingElem.one(self.torus) * other
        self._check(other)
        merged = dict(self.coeffs)
        for key, coeff in other.coeffs.items():
            merged[key] = merged[key] + coeff if key in merged else coeff
        return TorusRingElem(self.torus, merged)

    __radd__ = __add__

    def __neg__(self):
        return TorusRingElem(self.torus, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Cyc)):
            other = TorusRingElem.one(self.torus) * other
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Cyc)):
            return TorusRingElem(
                self.torus, {k: c * other for k, c in self.coeffs.items()}
            )
        self._check(other)
        moduli = self.torus.torsion_moduli()
        out: dict = {}
        for (q1, t1), c1 in self.coeffs.items():
            for (q2, t2), c2 in other.coeffs.items():
                key = (
                    tuple(a + b for a, b in zip(q1, q2)),
                    tuple((a + b) % m if m > 1 else 0 for a, b, m in zip(t1, t2, moduli)),
                )
                prod = c1 * c2
                out[key] = out[key] + prod if key in out else prod
        return TorusRingElem(self.torus, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = TorusRingElem.one(self.torus) * other
        if not isinstance(other, TorusRingElem):
            return NotImplemented
        return self.torus == other.torus and self.coeffs == other.coeffs

    def __repr__(self):
        return f"TorusRingElem({self.torus.degrees}, {len(self.coeffs)} monomials)"

    def support_degrees(self) -> set[int]:
        """Weighted Q-degrees sum(qexp_i * degree_i) over the support."""
        return {
            sum(q * d for q, d in zip(qexp, self.torus.degrees))
            for qexp, _ in self.coeffs
        }

    def graded_part(self, degree: int) -> "TorusRingElem":
        return TorusRingElem(
            self.torus,
            {
                (qexp, texp): c
                for (qexp, texp), c in self.coeffs.items()
                if sum(q * d for q, d in zip(qexp, self.torus.degrees)) == degree
            },
        )


def evaluate(x: TorusRingElem, theta: Character, conductor: int | None = None) -> Cyc:
    """Pairing of a group-algebra element with a character; ring hom in x."""
    if x.torus != theta.torus:
        raise TorusMismatchError("character on a different torus")
    moduli = x.torus.torsion_moduli()
    if conductor is None:
        conductor = lcm_all(
            [x.torus.params.torsion_modulus]
            + [alpha.conductor for _, alpha in theta.pairs]
            + [c.conductor for c in x.coeffs.values()]
        )
    total = Cyc.zero(conductor)
    for (qexp, texp), coeff in x.coeffs.items():
        term = coeff.embed(conductor) if coeff.conductor != conductor else coeff
        for (c, alpha), m, qe, te in zip(theta.pairs, moduli, qexp, texp):
            if qe:
                term = term * alpha ** qe
            if m > 1 and (c * te) % m:
                term = term * Cyc.root_of_unity(m, c * te, conductor)
        total = total + term
    return total


# -- normaliser action ---------------------------------------------------------


def apply_twist(x: TorusRingElem, slot: int) -> TorusRingElem:
    """Frobenius twist on one factor: torsion exponent t -> q*t, Q fixed."""
    q = x.torus.params.q
    moduli = x.torus.torsion_moduli()
    out: dict = {}
    for (qexp, texp), coeff in x.coeffs.items():
        t = list(texp)
        t[slot] = t[slot] * q % moduli[slot] if moduli[slot] > 1 else 0
        key = (qexp, tuple(t))
        out[key] = out[key] + coeff if key in out else coeff
    return TorusRingElem(x.torus, out)


def apply_permutation(x: TorusRingElem, perm: Sequence[int]) -> TorusRingElem:
    """Permute factor slots: new exponent at slot k = old exponent at perm[k]."""
    degrees = x.torus.degrees
    if tuple(degrees[p] for p in perm) != degrees:
        raise TorusMismatchError("permutation does not preserve factor degrees")
    out: dict = {}
    for (qexp, texp), coeff in x.coeffs.items():
        key = (tuple(qexp[p] for p in perm), tuple(texp[p] for p in perm))
        out[key] = out[key] + coeff if key in out else coeff
    return TorusRingElem(x.torus, out)


def apply_symmetry(x: TorusRingElem, g) -> TorusRingElem:
    """g is ("twist", slot) or ("perm", tuple)."""
    kind = g[0]
    if kind == "twist":
        return apply_twist(x, g[1])
    if kind == "perm":
        return apply_permutation(x, g[1])
    raise ValueError(f"unknown symmetry {g!r}")


def symmetry_generators(torus: Torus) -> list:
    """Generators of the normaliser action: per-slot twists, adjacent equal-degree swaps."""
    gens: list = [("twist", i) for i in range(torus.rank)]
    for i in range(torus.rank - 1):
        if torus.degrees[i] == torus.degrees[i + 1]:
            perm = list(range(torus.rank))
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
            gens.append(("perm", tuple(perm)))
    return gens


def is_invariant(x: TorusRingElem) -> bool:
    return all(apply_symmetry(x, g) == x for g in symmetry_generators(x.torus))


# -- distinguished elements -----------------------------------------------------


def trace_element(torus: Torus, word: tuple[int, int], mode: ModeConfig) -> TorusRingElem:
    """Closed form of the trace function of the word sigma^e Fr^f.

    A degree-d factor contributes sum_j zeta^(e q^j) Q^(f/d) s(d)^(f/d) when
    d | f and nothing otherwise; evaluation at any character theta equals the
    trace of the attached semisimple representation at the word.
    """
    e, f = word
    params = torus.params
    out = TorusRingElem.zero(torus)
    moduli = torus.torsion_moduli()
    for slot, d in enumerate(torus.degrees):
        if f % d != 0:
            continue
        sgn = mode.sign(d) ** abs(f // d)
        qexp = [0] * torus.rank
        qexp[slot] = f // d
        acc: dict = {}
        qq = 1
        for _ in range(d):
            texp = [0] * torus.rank
            texp[slot] = (e * qq) % moduli[slot] if moduli[slot] > 1 else 0
            key = (tuple(qexp), tuple(texp))
            val = Cyc.integer(sgn)
            acc[key] = acc[key] + val if key in acc else val
            qq = qq * params.q % params.torsion_modulus if params.torsion_modulus > 1 else 1
        out = out + TorusRingElem(torus, acc)
    return out


def compact_support(x: TorusRingElem) -> bool:
    """True iff every supported monomial has zero Q-exponent vector."""
    return all(all(q == 0 for q in qexp) for qexp, _ in x.coeffs)


# -- the comparison map ---------------------------------------------------------


def comparison_modulus(params: TameParams, m: int) -> int:
    """Torsion modulus mod which merge images into a deeper factor are defined."""
    return params.ell ** params.depth(m)


def comparison_map(x: TorusRingElem, n: int, mode: ModeConfig) -> TorusRingElem:
    """Merge j equal degree-m factors into one degree-n factor, n = j*m.

    Substitutes zeta_i -> zeta and Q_i -> eta^i Qhat with eta a primitive j-th
    root of unity and Qhat a formal j-th root of s*Q, where s is the mode's
    rectifier correction sign(n)/sign(m)^j.  Requires the input to be
    invariant under the normaliser of the source torus; the Qhat-exponent mass
    off the j-divisible lattice must cancel, else NonInvariantError.  When the
    target depth exceeds the source depth the image is only defined modulo
    (zeta^(ell^a(m)) - 1); the representative returned reduces torsion
    exponents to that modulus.
    """
    torus = x.torus
    if len(set(torus.degrees)) != 1:
        raise TorusMismatchError("comparison source must have equal factor degrees")
    if torus.rank * torus.degrees[0] != n:
        raise ValueError("target degree must be j*m")
    return merge_slots(x, range(torus.rank), mode)


def merge_slots(x: TorusRingElem, slots: Sequence[int], mode: ModeConfig) -> TorusRingElem:
    """Comparison map on a sub-tensor: merge the chosen equal-degree slots.

    The chosen slots (degree m, count j) become a single degree-(j*m) slot at
    position 0 of the result; the remaining slots follow in their original
    order.  Same substitution and caveats as comparison_map.
    """
    torus = x.torus
    slots = tuple(slots)
    degs = {torus.degrees[s] for s in slots}
    if len(degs) != 1:
        raise TorusMismatchError("merged slots must share a degree")
    m = degs.pop()
    j = len(slots)
    n0 = j * m
    params = torus.params
    rest = [i for i in range(torus.rank) if i not in slots]
    target = Torus(params, (n0,) + tuple(torus.degrees[i] for i in rest))
    if j == 1:
        perm = (slots[0],) + tuple(rest)
        return relabel_slots(x, perm, target)
    conductor = lcm_all([c.conductor for c in x.coeffs.values()] + [j, 2])
    eta = Cyc.root_of_unity(j, 1, conductor)
    s_cmp = mode.sign(n0) * mode.sign(m) ** j
    b_mod = comparison_modulus(params, m)

    merged: dict = {}
    for (qexp, texp), coeff in x.coeffs.items():
        total_q = sum(qexp[s] for s in slots)
        total_t = sum(texp[s] for s in slots) % b_mod if b_mod > 1 else 0
        phase = sum((i + 1) * qexp[s] for i, s in enumerate(slots))
        val = coeff * eta ** (phase % j)
        key = (
            total_q,
            total_t,
            tuple(qexp[i] for i in rest),
            tuple(texp[i] for i in rest),
        )
        merged[key] = merged[key] + val if key in merged else val

    out: dict = {}
    for (total_q, total_t, rq, rt), coeff in merged.items():
        if coeff.is_zero():
            continue
        if total_q % j != 0:
            raise NonInvariantError(
                f"Qhat-exponent {total_q} not divisible by {j}: input not invariant"
            )
        qpow = total_q // j
        val = coeff * Cyc.integer(s_cmp ** abs(qpow))
        key = ((qpow,) + rq, (total_t,) + rt)
        out[key] = out[key] + val if key in out else val
    return TorusRingElem(target, out)


def relabel_slots(x: TorusRingElem, perm: Sequence[int], target: Torus) -> TorusRingElem:
    """Move x onto another torus: target slot k carries source slot perm[k]."""
    if tuple(x.torus.degrees[p] for p in perm) != target.degrees:
        raise TorusMismatchError("slot relabeling does not match target degrees")
    out: dict = {}
    for (qexp, texp), coeff in x.coeffs.items():
        key = (tuple(qexp[p] for p in perm), tuple(texp[p] for p in perm))
        out[key] = out[key] + coeff if key in out else coeff
    return TorusRingElem(target, out)


def reduce_torsion_slot(x: TorusRingElem, slot: int, new_modulus: int) -> TorusRingElem:
    """Push the slot's torsion exponents down to Z/new_modulus (coefficients summed).

    Realises reduction modulo the ideal (zeta_slot^new_modulus - 1).
    """
    out: dict = {}
    for (qexp, texp), coeff in x.coeffs.items():
        t = list(texp)
        t[slot] = t[slot] % new_modulus if new_modulus > 1 else 0
        key = (qexp, tuple(t))
        out[key] = out[key] + coeff if key in out else coeff
    return TorusRingElem(x.torus, out)


def contract(x: TorusRingElem, assignments: dict[int, tuple[int, Cyc]], conductor: int | None = None) -> TorusRingElem:
    """Partially evaluate the given slots at (local exponent, alpha) pairs."""
    torus = x.torus
    moduli = torus.torsion_moduli()
    keep = [i for i in range(torus.rank) if i not in assignments]
    target = Torus(torus.params, tuple(torus.degrees[i] for i in keep))
    if conductor is None:
        conductor = lcm_all(
            [torus.params.torsion_modulus]
            + [alpha.conductor for _, alpha in assignments.values()]
            + [c.conductor for c in x.coeffs.values()]
        )
    out: dict = {}
    for (qexp, texp), coeff in x.coeffs.items():
        val = coeff.embed(conductor) if coeff.conductor != conductor else coeff
        for slot, (c, alpha) in assignments.items():
            if qexp[slot]:
                val = val * alpha ** qexp[slot]
            m = moduli[slot]
            if m > 1 and (c * texp[slot]) % m:
                val = val * Cyc.root_of_unity(m, c * texp[slot], conductor)
        key = (tuple(qexp[i] for i in keep), tuple(texp[i] for i in keep))
        out[key] = out[key] + val if key in out else val
    return TorusRingElem(target, out)


# -- matched characters ---------------------------------------------------------


def character_from_blocks(params: TameParams, blocks, conductor: int) -> tuple[Torus, Character]:
    """Build (torus, character) from factor blocks [(degree, c_global, alpha)]."""
    degrees = tuple(d for d, _, _ in blocks)
    torus = Torus(params, degrees)
    cap = params.torsion_modulus
    pairs = []
    for (d, c_glob, alpha), mod in zip(blocks, torus.torsion_moduli()):
        step = cap // mod
        if c_glob % step != 0:
            raise ValueError("global exponent too deep for this factor degree")
        pairs.append((c_glob // step % mod if mod > 1 else 0, alpha.embed(conductor) if alpha.conductor != conductor else alpha))
    return torus, Character(torus, tuple(pairs))


def realizations(rep: SSRep, params: TameParams, mode: ModeConfig, conductor: int) -> Iterator[tuple[Torus, Character]]:
    """All (relevant torus, character) pairs whose attached representation is rep.

    A factor of degree d = m*k with character (c, alpha) carries the full
    mu_k-coset of Frobenius values over the inertia orbit of c; realizations
    are the ways of tiling the piece multiset by such cosets with d relevant.
    """
    pieces = sorted(rep.pieces, key=lambda p: p.key())

    def rec(remaining: list, blocks: list):
        if not remaining:
            degrees = tuple(d for d, _, _ in blocks)
            order = sorted(range(len(blocks)), key=lambda i: -degrees[i])
            sorted_blocks = [blocks[i] for i in order]
            try:
                yield character_from_blocks(params, sorted_blocks, conductor)
            except ValueError:
                pass
            return
        first = remaining[0]
        m = first.orbit.size
        for k in range(1, len(remaining) + 1):
            d = m * k
            if d not in params.relevant_degrees:
                continue
            # the coset containing first: {first.phi * mu_k}
            try:
                coset = _mu_coset(first.phi, k, conductor)
            except Exception:
                continue
            if coset is None:
                continue
            target_keys = sorted(
                (first.orbit.rep, first.orbit.size, first.orbit.modulus, beta.min_key())
                for beta in coset
            )
            rest = list(remaining)
            used = []
            ok = True
            for tk in target_keys:
                for idx, piece in enumerate(rest):
                    if piece is not None and piece.key() == tk:
                        used.append(rest[idx])
                        rest[idx] = None
                        break
                else:
                    ok = False
                    break
            if not ok:
                continue
            rest = [p for p in rest if p is not None]
            alpha = (first.phi ** k) * mode.sign(d)
            blocks.append((d, first.orbit.rep, alpha))
            yield from rec(rest, blocks)
            blocks.pop()

    yield from rec(pieces, [])


def _mu_coset(beta: Cyc, k: int, conductor: int):
    """The coset beta * mu_k inside Q(zeta_conductor), or None if mu_k absent."""
    try:
        zk = Cyc.root_of_unity(k, 1, conductor)
    except Exception:
        return None
    b = beta.embed(conductor) if beta.conductor != conductor else beta
    return [b * zk ** i for i in range(k)]
