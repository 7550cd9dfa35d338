"""Coherent tuples over the relevant torus algebras: the desk-scale model of
the ring of compatible systems attached to dimension n.

A tuple stores one torus-algebra element per relevant partition of n (parts in
{1, e, ell*e, ell^2*e, ...}).  Membership is decided by finitely many symbolic
constraints: every component is invariant under the normaliser action, and for
every part and every supported way of splitting it into equal relevant
factors, the merged image of the split component agrees with the unsplit
component modulo the torsion ideal of the split depth.  The point oracle
re-checks the definition directly by enumerating or sampling matched
characters and comparing evaluations; agreement of the two routes is a
build-critical property, exercised in the tests and the acceptance suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional

from . import linalg
from .coeffring import Cyc, lcm_all
from .tameweil import ModeConfig, TameParams, rho_of
from .torusalg import (
    Character,
    Torus,
    TorusRingElem,
    comparison_modulus,
    compact_support,
    evaluate,
    is_invariant,
    merge_slots,
    realizations,
    reduce_torsion_slot,
    relabel_slots,
    trace_element,
)
from .util import GuardExceeded, partitions_with_parts


class CoherenceError(ValueError):
    def __init__(self, certificate):
        super().__init__(f"tuple is not coherent: {certificate.failures[:1]}")
        self.certificate = certificate


def relevant_partitions(params: TameParams, n: int) -> list[tuple[int, ...]]:
    """All partitions of n with relevant parts, coarsest first."""
    parts = [d for d in params.relevant_degrees if d <= n]
    out = partitions_with_parts(n, parts)
    return sorted(out, reverse=True)


def nu_max(params: TameParams, n: int) -> tuple[int, ...]:
    """The coarsest relevant partition of n (greedy by largest parts)."""
    out = []
    remaining = n
    for d in sorted(params.relevant_degrees, reverse=True):
        while d <= remaining:
            out.append(d)
            remaining -= d
    assert remaining == 0
    return tuple(out)


def associated_relevant(params: TameParams, nu: Iterable[int]) -> tuple[int, ...]:
    """Replace each part by copies of its largest relevant divisor."""
    out: list[int] = []
    for part in nu:
        m = params.largest_relevant_divisor(part)
        out.extend([m] * (part // m))
    return tuple(sorted(out, reverse=True))


def supported_splits(params: TameParams, part: int) -> list[tuple[int, int]]:
    """(m, j) with m relevant, m*j = part, j prime to ell or an ell power."""
    out = []
    for m in params.relevant_degrees:
        if m >= part or part % m != 0:
            continue
        j = part // m
        k = j
        while k % params.ell == 0:
            k //= params.ell
        if j % params.ell != 0 or k == 1:
            out.append((m, j))
    return out


@dataclass
class CoherenceCertificate:
    ok: bool
    failures: list = field(default_factory=list)
    checked: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


class CoherentTuple:
    """One torus-algebra element per relevant partition of n."""

    __slots__ = ("params", "mode", "n", "components")

    def __init__(self, params: TameParams, mode: ModeConfig, n: int, components: dict):
        self.params = params
        self.mode = mode
        self.n = n
        expected = set(relevant_partitions(params, n))
        comps = {}
        for key, val in components.items():
            key = tuple(key)
            if key not in expected:
                raise ValueError(f"{key} is not a relevant partition of {n}")
            comps[key] = val
        for key in expected:
            if key not in comps:
                comps[key] = TorusRingElem.zero(Torus(params, key))
        self.components = comps

    # -- ring structure ------------------------------------------------------

    def _check(self, other):
        if (self.params, self.mode, self.n) != (other.params, other.mode, other.n):
            raise ValueError("tuples live over different frames")

    def __add__(self, other):
        self._check(other)
        return CoherentTuple(
            self.params,
            self.mode,
            self.n,
            {k: self.components[k] + other.components[k] for k in self.components},
        )

    def __sub__(self, other):
        self._check(other)
        return CoherentTuple(
            self.params,
            self.mode,
            self.n,
            {k: self.components[k] - other.components[k] for k in self.components},
        )

    def __mul__(self, other):
        if isinstance(other, (int, Cyc, Fraction)):
            scal = Cyc.rational(other) if isinstance(other, (int, Fraction)) else other
            return CoherentTuple(
                self.params,
                self.mode,
                self.n,
                {k: v * scal for k, v in self.components.items()},
            )
        self._check(other)
        return CoherentTuple(
            self.params,
            self.mode,
            self.n,
            {k: self.components[k] * other.components[k] for k in self.components},
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1)

    def __eq__(self, other):
        if not isinstance(other, CoherentTuple):
            return NotImplemented
        return (
            (self.params, self.mode, self.n) == (other.params, other.mode, other.n)
            and self.components == other.components
        )

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.components.values())

    def __repr__(self):
        supp = [k for k, v in self.components.items() if not v.is_zero()]
        return f"CoherentTuple(n={self.n}, mode={self.mode.name}, support={supp})"

    @staticmethod
    def zero(params: TameParams, mode: ModeConfig, n: int) -> "CoherentTuple":
        return CoherentTuple(params, mode, n, {})

    @staticmethod
    def one(params: TameParams, mode: ModeConfig, n: int) -> "CoherentTuple":
        return CoherentTuple(
            params,
            mode,
            n,
            {p: TorusRingElem.one(Torus(params, p)) for p in relevant_partitions(params, n)},
        )


def sufficient_conductor(params: TameParams, n: int, value_modulus: int) -> int:
    """A conductor large enough for all roots the dimension-n machinery needs."""
    terms = [params.torsion_modulus, 2 * value_modulus]
    for d in params.relevant_degrees:
        if d > n:
            continue
        for m in params.relevant_degrees:
            if m <= d and d % m == 0:
                terms.append((d // m) * lcm_all([2, value_modulus]))
                terms.append(d // m)
    return lcm_all(terms)


# -- membership ------------------------------------------------------------------


def is_coherent(t: CoherentTuple) -> CoherenceCertificate:
    """Constraint-based membership decision with a certificate.

    (a) every component is invariant under its torus normaliser action;
    (b) for every relevant partition, every part value, and every supported
        split of that part into j equal relevant factors, the merged image of
        the split component agrees with the unsplit component modulo the
        torsion ideal of the split depth.
    """
    cert = CoherenceCertificate(ok=True)
    params, mode = t.params, t.mode
    for p, comp in sorted(t.components.items(), reverse=True):
        if not is_invariant(comp):
            cert.ok = False
            cert.failures.append(
                {"kind": "invariance", "partition": p}
            )
        else:
            cert.checked.append({"kind": "invariance", "partition": p})
    for p in sorted(t.components, reverse=True):
        for part in sorted(set(p), reverse=True):
            for m, j in supported_splits(params, part):
                ok, detail = _split_constraint(t, p, part, m, j)
                record = {
                    "kind": "split",
                    "partition": p,
                    "part": part,
                    "into": (m, j),
                }
                if ok:
                    cert.checked.append(record)
                else:
                    record["detail"] = detail
                    cert.ok = False
                    cert.failures.append(record)
    return cert


def _split_constraint(t: CoherentTuple, p: tuple, part: int, m: int, j: int):
    """Compare the merged split component with the unsplit component mod the ideal."""
    from .torusalg import NonInvariantError

    params, mode = t.params, t.mode
    split_key = list(p)
    split_key.remove(part)
    split_key.extend([m] * j)
    split_key = tuple(sorted(split_key, reverse=True))
    src = t.components[split_key]
    src_torus = src.torus

    # first j slots of degree m in the split partition
    m_slots = [i for i, d in enumerate(src_torus.degrees) if d == m][:j]
    try:
        merged = merge_slots(src, m_slots, mode)
    except NonInvariantError as exc:
        return False, f"merge escapes the target ring: {exc}"

    # merged torus: (part, rest...) where rest keeps source order; relabel to sorted p
    rest_degrees = [d for i, d in enumerate(src_torus.degrees) if i not in m_slots]
    merged_degrees = (part,) + tuple(rest_degrees)
    target = Torus(params, p)
    used = [False] * len(merged_degrees)
    perm = []
    for d in p:
        for i, md in enumerate(merged_degrees):
            if not used[i] and md == d:
                used[i] = True
                perm.append(i)
                break
    merged_slot_target = perm.index(0)
    aligned = relabel_slots(merged, tuple(perm), target)

    b_mod = comparison_modulus(params, m)
    lhs = reduce_torsion_slot(t.components[p], merged_slot_target, b_mod)
    rhs = reduce_torsion_slot(aligned, merged_slot_target, b_mod)
    if lhs == rhs:
        return True, None
    diff = lhs - rhs
    sample = next(iter(diff.coeffs.items()), None)
    return False, f"congruence fails mod torsion^{b_mod}; sample difference {sample!r}"


def coherence_point_oracle(
    t: CoherentTuple,
    samples: int = 200,
    value_modulus: int = 12,
    seed: int = 0,
    conductor: Optional[int] = None,
    exhaustive_limit: int = 600,
):
    """Brute-force of the definition: matched characters must evaluate equally.

    Enumerates the full character grid with Frobenius values in mu_N when it
    is small, else samples; matched realizations of each attached semisimple
    representation are compared pairwise.  Returns (ok, witness).
    """
    params, mode = t.params, t.mode
    if conductor is None:
        conductor = sufficient_conductor(params, t.n, value_modulus)
    rng = random.Random(seed)

    def char_grid(p):
        torus = Torus(params, p)
        moduli = torus.torsion_moduli()
        grids = []
        for mod in moduli:
            grids.append(
                [
                    (c, Cyc.root_of_unity(value_modulus, a, conductor))
                    for c in range(mod if mod > 1 else 1)
                    for a in range(value_modulus)
                ]
            )
        idx = [0] * len(grids)
        while True:
            yield Character(torus, tuple(grids[i][idx[i]] for i in range(len(grids))))
            k = 0
            while k < len(grids):
                idx[k] += 1
                if idx[k] < len(grids[k]):
                    break
                idx[k] = 0
                k += 1
            if k == len(grids):
                return

    total = 0
    for p in t.components:
        count = 1
        for mod in Torus(params, p).torsion_moduli():
            count *= (mod if mod > 1 else 1) * value_modulus
        total += count

    def check_rep_class(chars):
        """chars: list of (partition, Character) with one common attached rep."""
        if not chars:
            return True, None
        vals = []
        for p, theta in chars:
            vals.append((p, theta, evaluate(t.components[p], theta, conductor)))
        base = vals[0]
        for other in vals[1:]:
            if other[2] != base[2]:
                return False, {
                    "first": (base[0], _char_repr(base[1])),
                    "second": (other[0], _char_repr(other[1])),
                    "values": (repr(base[2]), repr(other[2])),
                }
        return True, None

    if total <= exhaustive_limit:
        groups: dict = {}
        for p in t.components:
            for theta in char_grid(p):
                rep = rho_of(theta.torus, theta, mode)
                groups.setdefault(rep.key(), []).append((p, theta))
        for chars in groups.values():
            ok, witness = check_rep_class(chars)
            if not ok:
                return False, witness
        return True, None

    # sampling mode
    parts = sorted(t.components)
    for _ in range(samples):
        p = parts[rng.randrange(len(parts))]
        torus = Torus(params, p)
        pairs = []
        for mod in torus.torsion_moduli():
            pairs.append(
                (
                    rng.randrange(mod) if mod > 1 else 0,
                    Cyc.root_of_unity(value_modulus, rng.randrange(value_modulus), conductor),
                )
            )
        theta = Character(torus, tuple(pairs))
        rep = rho_of(torus, theta, mode)
        chars = [(p, theta)]
        for torus2, theta2 in realizations(rep, params, mode, conductor):
            key = torus2.degrees
            if key in t.components:
                chars.append((key, theta2))
        ok, witness = check_rep_class(chars)
        if not ok:
            return False, witness
    return True, None


def _char_repr(theta: Character):
    return tuple((c, repr(alpha)) for c, alpha in theta.pairs)


# -- distinguished elements -------------------------------------------------------


def trace_tuple(params: TameParams, n: int, word: tuple[int, int], mode: ModeConfig) -> CoherentTuple:
    """The tuple of closed-form trace functions of the word; always coherent."""
    return CoherentTuple(
        params,
        mode,
        n,
        {
            p: trace_element(Torus(params, p), word, mode)
            for p in relevant_partitions(params, n)
        },
    )


def unit_Q(params: TameParams, n: int, mode: ModeConfig, verify: bool = True) -> CoherentTuple:
    """The scalar-uniformiser unit: Q-exponent one on every factor of every torus.

    Coherent in rectified mode; in plain mode membership fails for even split
    degrees and a CoherenceError carrying the certificate is raised unless
    verify=False.
    """
    comps = {}
    for p in relevant_partitions(params, n):
        torus = Torus(params, p)
        comps[p] = TorusRingElem.monomial(torus, (1,) * torus.rank, (0,) * torus.rank)
    out = CoherentTuple(params, mode, n, comps)
    if verify:
        cert = is_coherent(out)
        if not cert.ok:
            raise CoherenceError(cert)
    return out


# -- grading ----------------------------------------------------------------------


def grade(t: CoherentTuple) -> dict[int, CoherentTuple]:
    """Split into graded parts by weighted Q-degree; parts sum back to t."""
    degrees: set[int] = set()
    for comp in t.components.values():
        degrees |= comp.support_degrees()
    out = {}
    for d in sorted(degrees):
        out[d] = CoherentTuple(
            t.params,
            t.mode,
            t.n,
            {p: comp.graded_part(d) for p, comp in t.components.items()},
        )
    return out


# -- induction to Levi blocks -------------------------------------------------------


class InducedTuple:
    """Image of a tuple under restriction to a product of smaller frames.

    Indexed by choices of relevant partitions of the blocks; each component is
    the source component at the concatenated torus, with slots in block order.
    """

    __slots__ = ("params", "mode", "blocks", "components")

    def __init__(self, params, mode, blocks, components):
        self.params = params
        self.mode = mode
        self.blocks = tuple(blocks)
        self.components = components

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.components.values())

    def __eq__(self, other):
        if not isinstance(other, InducedTuple):
            return NotImplemented
        return (
            (self.params, self.mode, self.blocks)
            == (other.params, other.mode, other.blocks)
            and self.components == other.components
        )

    def __mul__(self, other):
        if not isinstance(other, InducedTuple) or self.blocks != other.blocks:
            raise ValueError("mismatched induced tuples")
        return InducedTuple(
            self.params,
            self.mode,
            self.blocks,
            {k: self.components[k] * other.components[k] for k in self.components},
        )

    def __add__(self, other):
        return InducedTuple(
            self.params,
            self.mode,
            self.blocks,
            {k: self.components[k] + other.components[k] for k in self.components},
        )


def ind_nu(t: CoherentTuple, nu: Iterable[int]) -> InducedTuple:
    """Restriction along the block structure nu = (nu_1, ..., nu_r).

    The component at a choice of relevant partitions (p_1, ..., p_r) of the
    blocks is t's component at the product torus, slots grouped by block; on
    points it realises the direct-sum map of attached representations.
    """
    nu = tuple(nu)
    params, mode = t.params, t.mode
    if sum(nu) != t.n:
        raise ValueError("blocks must sum to the tuple dimension")
    block_parts = [relevant_partitions(params, b) for b in nu]
    components = {}

    def rec(i, chosen):
        if i == len(nu):
            concat = tuple(d for p in chosen for d in p)
            sorted_key = tuple(sorted(concat, reverse=True))
            src = t.components[sorted_key]
            # target slot k (block order) pulls from a sorted slot of equal degree
            used = [False] * len(concat)
            sorted_degs = list(sorted_key)
            perm = []
            for d in concat:
                for idx, sd in enumerate(sorted_degs):
                    if not used[idx] and sd == d:
                        used[idx] = True
                        perm.append(idx)
                        break
            target = Torus(params, concat)
            components[tuple(chosen)] = relabel_slots(src, tuple(perm), target)
            return
        for p in block_parts[i]:
            rec(i + 1, chosen + [p])

    rec(0, [])
    return InducedTuple(params, mode, nu, components)


# -- kernel slices ------------------------------------------------------------------


@dataclass
class KernelSlice:
    basis: list[CoherentTuple]
    q_window: int
    had_candidates: bool


def kernel_slice_basis(
    params: TameParams,
    m: int,
    n: int,
    q_window: int,
    mode: ModeConfig,
) -> KernelSlice:
    """Basis of the kernel of the block restriction to j copies of m, within a
    window of Q-exponents on the top component.

    (m, n) must be consecutive relevant degrees.  Kernel tuples are supported
    on the one-part partition only; the top component must be normaliser
    invariant and vanish modulo the torsion ideal of depth a(m).  Exact
    rational linear algebra per Q-exponent.
    """
    rel = params.relevant_degrees
    if m not in rel or n not in rel or rel.index(n) != rel.index(m) + 1:
        raise ValueError("(m, n) must be consecutive relevant degrees")
    j = n // m
    # every relevant partition of n other than (n,) has parts <= m, hence is a
    # concatenation of relevant partitions of the j blocks and must vanish
    top = Torus(params, (n,))
    mod_n = params.ell ** params.depth(n)
    b_mod = comparison_modulus(params, m)

    # unknowns: torsion coefficients c_t for t mod ell^a(n)
    rows = []
    # twist invariance: c_{qt} = c_t
    for t0 in range(mod_n):
        row = [Fraction(0)] * mod_n
        row[t0 * params.q % mod_n] += 1
        row[t0] -= 1
        rows.append(row)
    # vanishing mod (zeta^(ell^a(m)) - 1): residue-class sums are zero
    for r in range(b_mod):
        row = [Fraction(0)] * mod_n
        for t0 in range(mod_n):
            if t0 % b_mod == r:
                row[t0] += 1
        rows.append(row)
    null = linalg.nullspace(rows, mod_n, Fraction(0), Fraction(1))

    basis = []
    had_candidates = q_window >= 0
    for qexp in range(-q_window, q_window + 1):
        for vec in null:
            den = 1
            for c in vec:
                den = den * c.denominator // gcd(den, c.denominator)
            coeffs = {}
            for t0, c in enumerate(vec):
                if c:
                    coeffs[((qexp,), (t0,))] = Cyc.integer(int(c * den))
            comp = TorusRingElem(top, coeffs)
            tup = CoherentTuple(params, mode, n, {(n,): comp})
            cert = is_coherent(tup)
            if not cert.ok:
                raise CoherenceError(cert)
            basis.append(tup)
    return KernelSlice(basis=basis, q_window=q_window, had_candidates=had_candidates)
