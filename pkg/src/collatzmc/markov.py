"""Exact stochastic matrices on the 8^m residue classes and their fixed vectors.

Transition probabilities come from the forward split of each class (image
multiplicity / 8) and agree with the invariant-measure quotient definition;
both constructions are kept so tests can cross-check one against the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .congruence import ClassUnion, CongruenceClass, forward_split, preimage_class, preimage_union
from .errors import CapacityError, ConsistencyError
from .measure import measure_class

#: Matrices above this level (8^5 = 32768 states) are refused.
DEFAULT_MAX_LEVEL = 5

#: Exact dense powering is limited to this level.
MAX_POWER_LEVEL = 2
MAX_POWER_EXPONENT = 32


@dataclass(frozen=True)
class TransitionMatrix:
    """Sparse row-stochastic matrix on the 8^level residue classes.

    Each row is a tuple of (column, probability) pairs with positive exact
    probabilities, sorted by column and summing to exactly 1.
    """

    level: int
    rows: tuple[tuple[tuple[int, Fraction], ...], ...]

    def __post_init__(self):
        size = self.size
        if len(self.rows) != size:
            raise ValueError(f"expected {size} rows, got {len(self.rows)}")
        for i, row in enumerate(self.rows):
            cols = [c for c, _ in row]
            if cols != sorted(cols) or len(set(cols)) != len(cols):
                raise ValueError(f"row {i} columns not sorted/unique")
            if any(not 0 <= c < size for c in cols):
                raise ValueError(f"row {i} has out-of-range column")
            if any(p <= 0 for _, p in row):
                raise ValueError(f"row {i} stores a non-positive probability")
            if sum(p for _, p in row) != 1:
                raise ValueError(f"row {i} does not sum to 1")

    @property
    def size(self) -> int:
        return 8**self.level

    def entry(self, i: int, j: int) -> Fraction:
        for col, p in self.rows[i]:
            if col == j:
                return p
        return Fraction(0)

    def dense(self) -> list[list[Fraction]]:
        if self.level > MAX_POWER_LEVEL:
            raise CapacityError(f"dense output refused above level {MAX_POWER_LEVEL}")
        out = [[Fraction(0)] * self.size for _ in range(self.size)]
        for i, row in enumerate(self.rows):
            for j, p in row:
                out[i][j] = p
        return out


@dataclass(frozen=True)
class Distribution:
    """Exact probability vector over the 8^level residue classes."""

    level: int
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.weights) != 8**self.level:
            raise ValueError("weight count does not match level")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        if sum(self.weights) != 1:
            raise ValueError("weights must sum to exactly 1")


def build_matrix(level: int, max_level: int = DEFAULT_MAX_LEVEL) -> TransitionMatrix:
    """Transition matrix at level m from the forward split of each class.

    Row i collects the image classes of the 8 refining subclasses of
    B(i, 8^m); every stored probability is a multiple of 1/8.
    """
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    if level > max_level:
        raise CapacityError(f"level {level} exceeds cap {max_level} (8^{level} states)")
    rows = []
    for i in range(8**level):
        multiplicity: dict[int, int] = {}
        for _, image in forward_split(CongruenceClass(i, level)):
            multiplicity[image.residue] = multiplicity.get(image.residue, 0) + 1
        rows.append(tuple((j, Fraction(n, 8)) for j, n in sorted(multiplicity.items())))
    return TransitionMatrix(level, tuple(rows))


def measure_quotient_matrix(level: int, max_level: int = MAX_POWER_LEVEL) -> TransitionMatrix:
    """Transition matrix from the measure quotient
    measure(B(i) and preimage B(j)) / measure(B(i)).

    Independent of build_matrix (goes through explicit preimage unions);
    intended as a cross-check at small levels.
    """
    if level > max_level:
        raise CapacityError(f"measure-quotient construction capped at level {max_level}")
    size = 8**level
    cells = [[Fraction(0)] * size for _ in range(size)]
    for j in range(size):
        for member in preimage_class(CongruenceClass(j, level)):
            cells[member.residue % size][j] += measure_class(member)
    rows = []
    for i in range(size):
        denom = measure_class(CongruenceClass(i, level))
        rows.append(tuple((j, cells[i][j] / denom) for j in range(size) if cells[i][j]))
    return TransitionMatrix(level, tuple(rows))


def left_multiply(weights, matrix: TransitionMatrix) -> list[Fraction]:
    """Exact row-vector times matrix product."""
    out = [Fraction(0)] * matrix.size
    for i, w in enumerate(weights):
        if w:
            for j, p in matrix.rows[i]:
                out[j] += w * p
    return out


def alternating_distribution(level: int) -> Distribution:
    """The closed-form fixed vector: 1/(6*8^{m-1}) at even indices, half that at odd."""
    a = Fraction(1, 6 * 8 ** (level - 1))
    b = Fraction(1, 12 * 8 ** (level - 1))
    return Distribution(level, tuple(a if i % 2 == 0 else b for i in range(8**level)))


def power_iteration(matrix: TransitionMatrix, tol: float = 1e-12, max_iter: int = 100_000) -> np.ndarray:
    """Float left fixed vector from the uniform start, iterated to max-norm tol."""
    size = matrix.size
    rows = np.fromiter(
        (i for i, row in enumerate(matrix.rows) for _ in row), dtype=np.intp
    )
    cols = np.fromiter((j for row in matrix.rows for j, _ in row), dtype=np.intp)
    probs = np.fromiter((float(p) for row in matrix.rows for _, p in row), dtype=np.float64)
    vec = np.full(size, 1.0 / size)
    for _ in range(max_iter):
        nxt = np.zeros(size)
        np.add.at(nxt, cols, vec[rows] * probs)
        if np.max(np.abs(nxt - vec)) < tol:
            return nxt
        vec = nxt
    raise ConsistencyError(f"power iteration did not converge to {tol} in {max_iter} steps")


def stationary_distribution(matrix: TransitionMatrix, tol: float = 1e-12) -> Distribution:
    """The stationary distribution of the class chain, verified two ways.

    The alternating closed form is checked to satisfy P*Q = P exactly, then
    cross-checked against floating-point power iteration within tol.
    """
    candidate = alternating_distribution(matrix.level)
    if left_multiply(candidate.weights, matrix) != list(candidate.weights):
        raise ConsistencyError("closed-form vector is not exactly stationary; matrix is corrupt")
    numeric = power_iteration(matrix, tol=tol)
    drift = max(abs(float(w) - x) for w, x in zip(candidate.weights, numeric))
    if drift > tol:
        raise ConsistencyError(f"power iteration disagrees with exact vector by {drift:.3e}")
    return candidate


def matrix_power(matrix: TransitionMatrix, exponent: int) -> TransitionMatrix:
    """Exact k-th power; capped to small levels where dense work is cheap."""
    if exponent < 1:
        raise ValueError(f"exponent must be >= 1, got {exponent}")
    if matrix.level > MAX_POWER_LEVEL:
        raise CapacityError(f"exact powering capped at level {MAX_POWER_LEVEL}")
    if exponent > MAX_POWER_EXPONENT:
        raise CapacityError(f"exponent {exponent} exceeds cap {MAX_POWER_EXPONENT}")
    result = matrix
    for _ in range(exponent - 1):
        rows = []
        for i in range(matrix.size):
            acc: dict[int, Fraction] = {}
            for k, p in result.rows[i]:
                for j, q in matrix.rows[k]:
                    acc[j] = acc.get(j, Fraction(0)) + p * q
            rows.append(tuple(sorted((j, p) for j, p in acc.items() if p)))
        result = TransitionMatrix(matrix.level, tuple(rows))
    return result


def kstep_measure_matrix(steps: int, level: int = 1) -> list[list[Fraction]]:
    """k-step transition probabilities computed from iterated preimages.

    Entry (i, j) is measure(B(i) and k-fold preimage of B(j)) / measure(B(i)),
    with the intersection read off the preimage union at level k+level.
    Independent of matrix multiplication; used to validate that the k-step
    chain equals the k-th matrix power.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    size = 8**level
    out = [[Fraction(0)] * size for _ in range(size)]
    for j in range(size):
        union = ClassUnion(level, (CongruenceClass(j, level),))
        for _ in range(steps):
            union = preimage_union(union)
        buckets: dict[int, Fraction] = {}
        for member in union:
            i = member.residue % size
            buckets[i] = buckets.get(i, Fraction(0)) + measure_class(member)
        for i, mass in buckets.items():
            out[i][j] = mass / measure_class(CongruenceClass(i, level))
    return out


@dataclass(frozen=True)
class ErgodicityResult:
    positive: bool
    exponent: int | None
    conclusive: bool

    def __str__(self):
        if self.positive:
            return f"all entries positive at exponent {self.exponent}"
        return "reducible/periodic" if self.conclusive else "inconclusive (bound exhausted)"


def check_ergodicity(matrix: TransitionMatrix, max_exponent: int | None = None) -> ErgodicityResult:
    """Search for a power of the matrix with strictly positive entries.

    Works on row supports as bitmasks (no cancellation can occur in a
    nonnegative product).  Stops early if the support closure stabilizes
    below full, which is conclusive evidence of reducibility/periodicity.
    """
    size = matrix.size
    bound = max_exponent if max_exponent is not None else 2 * size
    full = (1 << size) - 1
    base = [sum(1 << j for j, _ in row) for row in matrix.rows]
    current = base
    for exponent in range(1, bound + 1):
        if all(mask == full for mask in current):
            return ErgodicityResult(True, exponent, True)
        nxt = []
        for mask in current:
            acc, m = 0, mask
            while m:
                low = m & -m
                acc |= base[low.bit_length() - 1]
                m ^= low
            nxt.append(acc)
        if nxt == current:
            return ErgodicityResult(False, None, True)
        current = nxt
    return ErgodicityResult(False, None, False)


def emit_chain_graph(matrix: TransitionMatrix, force: bool = False) -> str:
    """DOT digraph of the class chain, nodes labelled B(i,8^m), exact edge weights.

    Meant for the 8-state chain; larger levels are refused unless forced.
    """
    if matrix.level > 1 and not force:
        raise ValueError(f"graph emission intended for level 1; got level {matrix.level} (use force)")
    modulus = matrix.size
    lines = ["digraph residue_chain {", "  rankdir=LR;"]
    for i in range(matrix.size):
        lines.append(f'  "B({i},{modulus})";')
    for i, row in enumerate(matrix.rows):
        for j, p in row:
            lines.append(f'  "B({i},{modulus})" -> "B({j},{modulus})" [label="{p}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
