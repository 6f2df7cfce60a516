"""Finite-n Schur-Weyl machinery.

Young indices, majorization, exact dimension formulas, symmetric-group
characters (Murnaghan-Nakayama), the projectors P_lambda synthesized from
cached conjugacy-class sums, type projectors, the joint Schur-sampling +
empirical-type measurement with its exact outcome distribution, the type
pinching map, and the block decomposition of permutation-invariant operators.

Integer data (dimensions, characters, multinomials) is kept exact; floats
enter only at operator entries.  Permutations act by index permutation on
tensor positions and are never materialized beyond the cached class sums.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .errors import ResourceBudgetError, ValidationError
from .spectral import _as_matrix

MAX_N_OPERATOR = 8
MAX_TENSOR_DIM = 4096
MAX_N_FORMULA = 20


def _check_budget(n: int, d: int, max_n: int = MAX_N_OPERATOR, max_dim: int = MAX_TENSOR_DIM):
    if n > max_n or d**n > max_dim:
        raise ResourceBudgetError(
            f"operator-level work at n={n}, d={d} exceeds budget (n<={max_n}, d^n<={max_dim})"
        )


# ---------------------------------------------------------------------------
# Young indices, types, majorization


@dataclass(frozen=True, order=True)
class YoungIndex:
    """A partition of n into at most d parts, stored nonincreasing.

    The ascending rendering used by some references is available through
    ``ascending()``; all internal work uses the highest-weight (nonincreasing)
    convention.
    """

    parts: Tuple[int, ...]

    def __post_init__(self):
        if any(p < 0 for p in self.parts) or any(
            a < b for a, b in zip(self.parts, self.parts[1:])
        ):
            raise ValidationError(f"parts {self.parts} not nonincreasing nonnegative")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def ascending(self) -> Tuple[int, ...]:
        return tuple(reversed(self.parts))

    def distribution(self) -> np.ndarray:
        return np.asarray(self.parts, dtype=float) / self.n


@dataclass(frozen=True, order=True)
class TypeVector:
    """Letter counts of a length-n sequence over d symbols."""

    counts: Tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise ValidationError(f"negative count in {self.counts}")

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def d(self) -> int:
        return len(self.counts)

    def distribution(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float) / self.n

    def diag_state(self) -> np.ndarray:
        return np.diag(self.distribution()).astype(complex)


@dataclass(frozen=True)
class CycleType:
    """Cycle lengths of a conjugacy class of the permutation group."""

    lengths: Tuple[int, ...]

    def __post_init__(self):
        if any(l <= 0 for l in self.lengths) or any(
            a < b for a, b in zip(self.lengths, self.lengths[1:])
        ):
            raise ValidationError(f"lengths {self.lengths} not positive nonincreasing")

    @property
    def n(self) -> int:
        return sum(self.lengths)


def enumerate_young(n: int, d: int) -> List[YoungIndex]:
    """All partitions of n into at most d parts, padded to d, canonical order."""

    def gen(rest, maxpart, slots):
        if slots == 0:
            if rest == 0:
                yield ()
            return
        for p in range(min(rest, maxpart), -1, -1):
            if rest - p > p * (slots - 1):
                continue
            for tail in gen(rest - p, p, slots - 1):
                yield (p,) + tail

    return [YoungIndex(parts) for parts in gen(n, n, d)]


def enumerate_types(n: int, d: int) -> List[TypeVector]:
    """All compositions of n into d nonnegative parts, lexicographically descending."""
    out = []

    def gen(rest, slots, prefix):
        if slots == 1:
            out.append(prefix + (rest,))
            return
        for c in range(rest, -1, -1):
            gen(rest - c, slots - 1, prefix + (c,))

    gen(n, d, ())
    return [TypeVector(c) for c in out]


def majorizes(a: Sequence[float], b: Sequence[float], tol: float = 1e-12) -> bool:
    """Prefix-sum dominance of a over b, both sorted nonincreasing, equal totals."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValidationError("majorization needs equal lengths")
    if abs(a.sum() - b.sum()) > max(tol, 1e-12 * (1 + abs(a.sum()))):
        raise ValidationError(f"totals differ: {a.sum()} vs {b.sum()}")
    return bool(np.all(np.cumsum(a) >= np.cumsum(b) - 1e-9))


def in_r_set(young: YoungIndex, typ: TypeVector) -> bool:
    """Nonvanishing condition: the Young index majorizes n times the sorted type."""
    spect = np.sort(np.asarray(typ.counts, dtype=float))[::-1]
    return majorizes(np.asarray(young.parts, dtype=float), spect)


# ---------------------------------------------------------------------------
# Dimensions and characters (exact integer arithmetic)


def multiplicity_dim(young: YoungIndex) -> int:
    """dim V_lambda = (n!/lambda!) e(lambda) in the ascending-parts form."""
    asc = [p for p in young.ascending()]
    n = young.n
    val = Fraction(math.factorial(n))
    for p in asc:
        val /= math.factorial(p)
    for i in range(len(asc)):
        for j in range(i + 1, len(asc)):
            num = asc[j] - asc[i] - i + j
            den = asc[j] + j - i
            val *= Fraction(num, den)
    assert val.denominator == 1
    return int(val)


def unitary_dim(young: YoungIndex, d: int) -> int:
    """Weyl dimension of the unitary-group irrep with highest weight lambda."""
    parts = list(young.parts) + [0] * (d - len(young.parts))
    if len(parts) > d and any(parts[d:]):
        raise ValidationError(f"{young} has more than {d} parts")
    parts = parts[:d]
    val = Fraction(1)
    for i in range(d):
        for j in range(i + 1, d):
            val *= Fraction(parts[i] - parts[j] + j - i, j - i)
    assert val.denominator == 1
    return int(val)


def cycle_types(n: int) -> List[CycleType]:
    return [CycleType(tuple(p for p in y.parts if p)) for y in enumerate_young(n, n)]


def class_size(ct: CycleType) -> int:
    """Number of permutations with the given cycle type."""
    n = ct.n
    size = math.factorial(n)
    for length, mult in zip(*np.unique(ct.lengths, return_counts=True)):
        size //= int(length) ** int(mult) * math.factorial(int(mult))
    return size


@lru_cache(maxsize=None)
def _mn_char(beta: Tuple[int, ...], cycles: Tuple[int, ...]) -> int:
    """Murnaghan-Nakayama on first-column hook (beta) sets."""
    if not cycles:
        return 1
    l = cycles[0]
    rest = cycles[1:]
    total = 0
    bset = set(beta)
    for b in beta:
        b2 = b - l
        if b2 < 0 or b2 in bset:
            continue
        height = sum(1 for x in beta if b2 < x < b)
        newbeta = tuple(sorted(bset - {b} | {b2}))
        total += (-1) ** height * _mn_char(newbeta, rest)
    return total


def sn_character(shape: YoungIndex, ct: CycleType) -> int:
    """Exact character of the symmetric-group irrep of the given shape."""
    if shape.n != ct.n:
        raise ValidationError(f"shape partitions {shape.n} but class partitions {ct.n}")
    parts = [p for p in shape.parts if p > 0] or [0]
    L = len(parts)
    beta = tuple(sorted(parts[i] + (L - 1 - i) for i in range(L)))
    # Longer cycles first keeps the recursion shallow.
    cyc = tuple(sorted(ct.lengths, reverse=True))
    return _mn_char(beta, cyc)


# ---------------------------------------------------------------------------
# Tensor-index plumbing and cached class sums


@lru_cache(maxsize=None)
def _digits(n: int, d: int) -> np.ndarray:
    idx = np.arange(d**n)
    out = np.empty((d**n, n), dtype=np.int64)
    for pos in range(n - 1, -1, -1):
        out[:, pos] = idx % d
        idx //= d
    return out


@lru_cache(maxsize=None)
def _powers(n: int, d: int) -> np.ndarray:
    return d ** np.arange(n - 1, -1, -1, dtype=np.int64)


def _perm_dest(perm: Tuple[int, ...], n: int, d: int) -> np.ndarray:
    """Index map of the operator permuting tensor positions by ``perm``."""
    dig = _digits(n, d)
    return dig[:, perm] @ _powers(n, d)


def _cycle_type_of(perm: Tuple[int, ...]) -> Tuple[int, ...]:
    seen = [False] * len(perm)
    lens = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        l = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            l += 1
        lens.append(l)
    return tuple(sorted(lens, reverse=True))


@lru_cache(maxsize=None)
def _class_sums(n: int, d: int) -> Dict[Tuple[int, ...], np.ndarray]:
    """Dense matrices sum_{pi in class} U(pi), one per cycle type."""
    _check_budget(n, d)
    dim = d**n
    sums: Dict[Tuple[int, ...], np.ndarray] = {}
    src = np.arange(dim)
    for perm in itertools.permutations(range(n)):
        ct = _cycle_type_of(perm)
        m = sums.setdefault(ct, np.zeros((dim, dim)))
        np.add.at(m, (_perm_dest(perm, n, d), src), 1.0)
    return sums


@lru_cache(maxsize=None)
def _type_index_groups(n: int, d: int):
    """For each type, the sorted array of basis indices carrying that type."""
    dig = _digits(n, d)
    counts = np.stack([(dig == j).sum(axis=1) for j in range(d)], axis=1)
    groups: Dict[Tuple[int, ...], np.ndarray] = {}
    for t in enumerate_types(n, d):
        mask = np.all(counts == np.asarray(t.counts), axis=1)
        groups[t.counts] = np.nonzero(mask)[0]
    return groups


@lru_cache(maxsize=None)
def _type_id_vector(n: int, d: int) -> np.ndarray:
    groups = _type_index_groups(n, d)
    ids = np.empty(d**n, dtype=np.int64)
    for k, (_, idxs) in enumerate(sorted(groups.items(), reverse=True)):
        ids[idxs] = k
    return ids


# ---------------------------------------------------------------------------
# Projectors


@lru_cache(maxsize=None)
def _young_projector_cached(parts: Tuple[int, ...], n: int, d: int) -> np.ndarray:
    sums = _class_sums(n, d)
    y = YoungIndex(parts)
    f = multiplicity_dim(y)
    dim = d**n
    p = np.zeros((dim, dim))
    for ct_lengths, m in sums.items():
        chi = sn_character(y, CycleType(ct_lengths))
        if chi:
            p += chi * m
    p *= f / math.factorial(n)
    return (p + p.T) / 2


def young_projector(young: YoungIndex, n: int, d: int) -> np.ndarray:
    """Projector onto the U_lambda (x) V_lambda block of the n-fold tensor space."""
    if young.n != n:
        raise ValidationError(f"{young} does not partition {n}")
    if len([p for p in young.parts if p]) > d:
        raise ValidationError(f"{young} has more than {d} parts")
    parts = tuple(young.parts) + (0,) * (d - len(young.parts))
    return _young_projector_cached(parts[:max(d, len(young.parts))], n, d)


def type_projector(typ: TypeVector, d: int) -> np.ndarray:
    """Diagonal 0/1 projector onto all sequences with the given letter counts."""
    n = typ.n
    _check_budget(n, d)
    diag = np.zeros(d**n)
    diag[_type_index_groups(n, d)[typ.counts]] = 1.0
    return np.diag(diag)


def joint_projector(young: YoungIndex, typ: TypeVector, d: int) -> np.ndarray:
    """P_lambda restricted to a type sector; an orthogonal projector since the
    diagonal, permutation-invariant type projector commutes with P_lambda."""
    n = typ.n
    if young.n != n:
        raise ValidationError("Young index and type partition different n")
    p = young_projector(young, n, d)
    mask = np.zeros(d**n)
    mask[_type_index_groups(n, d)[typ.counts]] = 1.0
    return mask[:, None] * p * mask[None, :]


# ---------------------------------------------------------------------------
# Measurement distribution


@dataclass
class JointOutcomeDistribution:
    """Exact outcome law of the joint (Young index, type) measurement on sigma^(x)n."""

    n: int
    d: int
    entries: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], float]
    sigma: np.ndarray

    def total(self) -> float:
        return float(sum(self.entries.values()))

    def canonical_items(self):
        return sorted(self.entries.items(), key=lambda kv: (tuple(-x for x in kv[0][0]), tuple(-x for x in kv[0][1])))

    def young_marginal(self) -> Dict[Tuple[int, ...], float]:
        out: Dict[Tuple[int, ...], float] = {}
        for (young, _), p in self.entries.items():
            out[young] = out.get(young, 0.0) + p
        return out

    def type_marginal(self) -> Dict[Tuple[int, ...], float]:
        out: Dict[Tuple[int, ...], float] = {}
        for (_, typ), p in self.entries.items():
            out[typ] = out.get(typ, 0.0) + p
        return out

    def to_json_entries(self):
        return [
            {"young": list(young), "type": list(typ), "prob": prob}
            for (young, typ), prob in self.canonical_items()
        ]


def tensor_power(sigma, n: int) -> np.ndarray:
    m = _as_matrix(sigma)
    out = np.array([[1.0 + 0j]])
    for _ in range(n):
        out = np.kron(out, m)
    return out


def outcome_distribution(sigma, n: int) -> JointOutcomeDistribution:
    """Exact probabilities Tr sigma^(x)n P_lambda T_type over the admissible pairs."""
    m = _as_matrix(sigma)
    d = m.shape[0]
    _check_budget(n, d)
    big = tensor_power(m, n)
    groups = _type_index_groups(n, d)
    entries: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], float] = {}
    for young in enumerate_young(n, d):
        p = young_projector(young, n, d)
        diag = np.einsum("ij,ji->i", big, p).real
        for typ in enumerate_types(n, d):
            prob = float(diag[groups[typ.counts]].sum())
            if in_r_set(young, typ):
                entries[(young.parts, typ.counts)] = max(prob, 0.0)
            elif abs(prob) > 1e-10:
                raise ValidationError(
                    f"nonzero probability {prob} on excluded pair {young.parts}, {typ.counts}"
                )
    dist = JointOutcomeDistribution(n=n, d=d, entries=entries, sigma=m)
    if abs(dist.total() - 1.0) > 1e-9:
        raise ValidationError(f"outcome probabilities sum to {dist.total()}")
    return dist


def sample_outcomes(dist: JointOutcomeDistribution, count: int, seed: int):
    """Deterministic i.i.d. draws from the exact outcome distribution."""
    items = dist.canonical_items()
    probs = np.asarray([p for _, p in items])
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum()
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(items), size=count, p=probs)
    return [items[i][0] for i in picks]


# ---------------------------------------------------------------------------
# Pinching and block maps


def pinch_types(x, n: int, d: int) -> np.ndarray:
    """Kill matrix elements between different type sectors (the basis pinching)."""
    m = _as_matrix(x)
    _check_budget(n, d)
    ids = _type_id_vector(n, d)
    return m * (ids[:, None] == ids[None, :])


@lru_cache(maxsize=None)
def _gz_splitter(n: int, d: int) -> np.ndarray:
    """A generic element of the Jucys-Murphy commutative family.

    Acts as identity (x) diagonal on every U_lambda (x) V_lambda block with
    generically simple spectrum on V_lambda, so its eigenspaces inside a block
    single out one U_lambda copy each.
    """
    dim = d**n
    rng = np.random.default_rng(20240917)
    r = np.zeros((dim, dim))
    src = np.arange(dim)
    for k in range(1, n):
        coeff = rng.normal()
        for i in range(k):
            perm = list(range(n))
            perm[i], perm[k] = perm[k], perm[i]
            dest = _perm_dest(tuple(perm), n, d)
            r[dest, src] += coeff
    return (r + r.T) / 2


@lru_cache(maxsize=None)
def _block_isometry(parts: Tuple[int, ...], n: int, d: int) -> np.ndarray:
    """d^n x dim(U_lambda) isometry onto one V_lambda-copy of U_lambda."""
    young = YoungIndex(parts)
    p = young_projector(young, n, d)
    vals, vecs = np.linalg.eigh(p)
    basis = vecs[:, vals > 0.5]
    m_u = unitary_dim(young, d)
    r = _gz_splitter(n, d)
    rb = basis.conj().T @ r @ basis
    rvals, rvecs = np.linalg.eigh((rb + rb.conj().T) / 2)
    # Eigenvalues cluster into dim(V_lambda) groups of size dim(U_lambda).
    cluster = [0]
    for i in range(1, len(rvals)):
        if rvals[i] - rvals[i - 1] > 1e-6:
            break
        cluster.append(i)
    if len(cluster) != m_u:
        raise ValidationError(
            f"splitter degeneracy: cluster size {len(cluster)} != dim U = {m_u} for {parts}"
        )
    return basis @ rvecs[:, cluster]


def _assert_permutation_invariant(m: np.ndarray, n: int, d: int, tol: float = 1e-8):
    scale = max(np.abs(m).max(), 1.0)
    for perm in [(1, 0) + tuple(range(2, n)), tuple(range(1, n)) + (0,)]:
        if n == 1:
            break
        dest = _perm_dest(perm, n, d)
        conj = m[np.ix_(dest, dest)]
        # (U m U^dag)[dest,dest] = m, so compare m against its conjugated image
        moved = np.empty_like(m)
        moved[np.ix_(dest, dest)] = m
        if np.abs(moved - m).max() > tol * scale:
            raise ValidationError("operator is not permutation-invariant")


def block_decompose(x, n: int, d: int) -> List[Tuple[YoungIndex, np.ndarray]]:
    """Partial trace over V_lambda of P_lambda X P_lambda, per Young index.

    Input must commute with the permutation action.  Returns operators on
    U_lambda (in the cached isometry basis) whose traces sum to Tr X.
    """
    m = _as_matrix(x)
    _check_budget(n, d)
    _assert_permutation_invariant(m, n, d)
    out = []
    for young in enumerate_young(n, d):
        parts = young.parts
        w = _block_isometry(parts, n, d)
        block = multiplicity_dim(young) * (w.conj().T @ m @ w)
        out.append((young, (block + block.conj().T) / 2))
    return out


def block_embed(blocks: List[Tuple[YoungIndex, np.ndarray]], n: int, d: int) -> np.ndarray:
    """Inverse of block_decompose on permutation-invariant operators.

    Each block is reinflated as (block/dim V_lambda) (x) identity on V_lambda,
    realized by twirling the isometry image over the permutation group.
    """
    _check_budget(n, d)
    dim = d**n
    out = np.zeros((dim, dim), dtype=complex)
    dests = [_perm_dest(perm, n, d) for perm in itertools.permutations(range(n))]
    for young, block in blocks:
        block = np.asarray(block)
        m_u = unitary_dim(young, d)
        if block.shape != (m_u, m_u):
            raise ValidationError(
                f"block for {young.parts} has shape {block.shape}, expected {(m_u, m_u)}"
            )
        # Twirling block (x) |v><v| over the permutation group yields
        # (block) (x) I/dim(V_lambda), which is exactly Gamma_2 of the block.
        w = _block_isometry(young.parts, n, d)
        y = w @ block @ w.conj().T
        acc = np.zeros_like(out)
        for dest in dests:
            acc[np.ix_(dest, dest)] += y
        out += acc / math.factorial(n)
    return out
