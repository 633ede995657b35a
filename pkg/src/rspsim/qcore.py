"""Exact state-vector quantum mechanics on registers of one to three qubits.

Amplitudes are ordered big-endian: in the computational-basis index, qubit 0
is the most significant (leftmost) bit.  Every value type normalizes and
freezes its array on construction, so instances can be shared freely.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateBranchError, DomainError

__all__ = [
    "TargetQubit", "PureState", "DensityMatrix", "Gate", "PovmElement", "Branch", "Fidelity",
    "PROBABILITY", "OVERLAP",
    "I2", "X", "Y", "Z", "H", "CNOT",
    "make_target_state", "basis_state", "tensor", "apply_gate",
    "measure_enumerate", "apply_povm_element", "partial_trace", "fidelity",
    "equivalent_up_to_phase", "overlap",
]

ATOL = 1e-12
MAX_QUBITS = 3

# fidelity conventions
PROBABILITY = "probability"  # <phi|rho|phi>
OVERLAP = "overlap"  # |<phi'|phi>|


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def _qubit_count(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or 2**n != dim or n > MAX_QUBITS:
        raise DomainError(f"dimension {dim} is not 2**n for n in 1..{MAX_QUBITS}")
    return n


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector over ``num_qubits`` qubits."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        _qubit_count(amps.size)
        norm = np.linalg.norm(amps)
        if norm < 1e-15:
            raise DegenerateBranchError("cannot normalize a zero vector")
        object.__setattr__(self, "amplitudes", _frozen(amps / norm))

    @property
    def num_qubits(self) -> int:
        return _qubit_count(self.amplitudes.size)

    def density(self) -> "DensityMatrix":
        a = self.amplitudes
        return DensityMatrix(np.outer(a, a.conj()))

    def __repr__(self):
        return f"PureState({np.array2string(self.amplitudes, precision=6)})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix (normalized on construction)."""

    entries: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise DomainError(f"density matrix must be square, got shape {rho.shape}")
        _qubit_count(rho.shape[0])
        if not np.allclose(rho, rho.conj().T, atol=ATOL):
            raise DomainError("density matrix is not Hermitian")
        tr = np.trace(rho).real
        if tr < 1e-15:
            raise DegenerateBranchError("density matrix has zero trace")
        rho = rho / tr
        if np.linalg.eigvalsh(rho).min() < -ATOL:
            raise DomainError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", _frozen(rho))

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    @property
    def num_qubits(self) -> int:
        return _qubit_count(self.dimension)

    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)


@dataclass(frozen=True, eq=False)
class Gate:
    """Unitary acting on one or two qubits."""

    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape not in ((2, 2), (4, 4)):
            raise DomainError(f"gate must be 2x2 or 4x4, got {m.shape}")
        if not np.allclose(m @ m.conj().T, np.eye(m.shape[0]), atol=ATOL):
            raise DomainError(f"gate {self.name or '<unnamed>'} is not unitary")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def arity(self) -> int:
        return 1 if self.matrix.shape[0] == 2 else 2


@dataclass(frozen=True, eq=False)
class PovmElement:
    """Single-qubit measurement operator M with 0 <= M^dagger M <= I."""

    matrix: np.ndarray
    name: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise DomainError(f"POVM element must be 2x2, got {m.shape}")
        ev = np.linalg.eigvalsh(m.conj().T @ m)
        if ev.min() < -ATOL or ev.max() > 1 + ATOL:
            raise DomainError(
                f"POVM element {self.name or '<unnamed>'} has M^dagger M eigenvalues "
                f"outside [0, 1]: {ev}"
            )
        object.__setattr__(self, "matrix", _frozen(m))

    def effect(self) -> np.ndarray:
        return self.matrix.conj().T @ self.matrix


class Branch(NamedTuple):
    """One outcome of a projective measurement; ``state`` is None when probability is 0."""

    outcome: int
    probability: float
    state: PureState | None


class Fidelity(NamedTuple):
    value: float
    convention: str

    def __float__(self):
        return float(self.value)


I2 = Gate(np.eye(2), "I")
X = Gate([[0, 1], [1, 0]], "X")
Y = Gate([[0, -1j], [1j, 0]], "Y")
Z = Gate([[1, 0], [0, -1]], "Z")
H = Gate(np.array([[1, 1], [1, -1]]) / np.sqrt(2), "H")
# control is the first target qubit
CNOT = Gate([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], "CNOT")


def make_target_state(theta: float, phi: float, partner: bool = False) -> PureState:
    """Return cos(theta)|0> + sin(theta) e^{i phi}|1>.

    With ``partner=True`` the orthonormal companion
    sin(theta)|0> - cos(theta) e^{i phi}|1> is returned instead.
    """
    if not (0.0 <= theta <= np.pi / 2):
        raise DomainError(f"theta={theta!r} outside [0, pi/2]")
    if not (0.0 <= phi < 2 * np.pi):
        raise DomainError(f"phi={phi!r} outside [0, 2*pi)")
    c, s, e = np.cos(theta), np.sin(theta), np.exp(1j * phi)
    if partner:
        return PureState([s, -c * e])
    return PureState([c, s * e])


@dataclass(frozen=True)
class TargetQubit:
    """Bloch-sphere angles of the state Alice wants Bob to hold."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        make_target_state(self.theta, self.phi)  # validates ranges

    @property
    def state(self) -> PureState:
        return make_target_state(self.theta, self.phi)

    @property
    def partner(self) -> PureState:
        return make_target_state(self.theta, self.phi, partner=True)


def basis_state(bits: str) -> PureState:
    """Computational basis ket, e.g. ``basis_state("10")`` is |10>."""
    amps = np.zeros(2 ** len(bits), dtype=complex)
    amps[int(bits, 2)] = 1.0
    return PureState(amps)


def tensor(*states: PureState) -> PureState:
    amps = np.array([1.0 + 0j])
    for s in states:
        amps = np.kron(amps, s.amplitudes)
    return PureState(amps)


def _check_qubits(n: int, qubits: Sequence[int]):
    for q in qubits:
        if not (0 <= q < n):
            raise DomainError(f"qubit index {q} out of range for {n} qubits")
    if len(set(qubits)) != len(qubits):
        raise DomainError(f"qubit indices must be distinct: {tuple(qubits)}")


def _apply_local(amps: np.ndarray, n: int, matrix: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    k = len(targets)
    psi = np.moveaxis(amps.reshape([2] * n), list(targets), list(range(k)))
    shape = psi.shape
    psi = (matrix @ psi.reshape(2**k, -1)).reshape(shape)
    return np.moveaxis(psi, list(range(k)), list(targets)).reshape(-1)


def apply_gate(state: PureState, gate: Gate, targets: int | Sequence[int]) -> PureState:
    """Apply ``gate`` to the ordered ``targets`` of ``state``."""
    if isinstance(targets, (int, np.integer)):
        targets = (int(targets),)
    targets = tuple(targets)
    if len(targets) != gate.arity:
        raise DomainError(f"gate of arity {gate.arity} given {len(targets)} targets")
    n = state.num_qubits
    _check_qubits(n, targets)
    return PureState(_apply_local(state.amplitudes, n, gate.matrix, targets))


def measure_enumerate(state: PureState, qubit: int) -> list[Branch]:
    """Enumerate both outcomes of a computational-basis measurement of ``qubit``.

    Post-measurement states keep the measured qubit (collapsed) in the register.
    """
    n = state.num_qubits
    _check_qubits(n, (qubit,))
    psi = state.amplitudes.reshape([2] * n)
    branches = []
    for bit in (0, 1):
        proj = np.zeros_like(psi)
        idx = [slice(None)] * n
        idx[qubit] = bit
        proj[tuple(idx)] = psi[tuple(idx)]
        p = float(np.vdot(proj, proj).real)
        post = PureState(proj.reshape(-1)) if p > 1e-15 else None
        branches.append(Branch(bit, p if post is not None else 0.0, post))
    return branches


def apply_povm_element(state: PureState, element: PovmElement, qubit: int = 0) -> tuple[float, PureState]:
    """Apply one POVM operator to ``qubit``; return (probability, renormalized state)."""
    n = state.num_qubits
    _check_qubits(n, (qubit,))
    out = _apply_local(state.amplitudes, n, element.matrix, (qubit,))
    p = float(np.vdot(out, out).real)
    if p < 1e-15:
        raise DegenerateBranchError(
            f"POVM element {element.name or '<unnamed>'} has probability {p:.3g}"
        )
    return p, PureState(out)


def partial_trace(state: PureState | DensityMatrix, keep: int | Sequence[int]) -> DensityMatrix:
    """Reduced density matrix on the qubits in ``keep`` (kept in ascending order)."""
    if isinstance(keep, (int, np.integer)):
        keep = (int(keep),)
    keep = sorted(set(keep))
    n = state.num_qubits
    _check_qubits(n, keep)
    if not keep or len(keep) == n:
        raise DomainError("keep must be a nonempty proper subset of the qubits")
    drop = [q for q in range(n) if q not in keep]
    dk = 2 ** len(keep)
    if isinstance(state, PureState):
        psi = np.moveaxis(state.amplitudes.reshape([2] * n), keep, list(range(len(keep))))
        m = psi.reshape(dk, -1)
        return DensityMatrix(m @ m.conj().T)
    rho = state.entries.reshape([2] * (2 * n))
    # bring (keep rows, drop rows, keep cols, drop cols) together
    order = keep + drop + [n + q for q in keep] + [n + q for q in drop]
    rho = rho.transpose(order).reshape(dk, 2 ** len(drop), dk, 2 ** len(drop))
    return DensityMatrix(np.einsum("ajbj->ab", rho))


def overlap(a: PureState, b: PureState) -> float:
    """|<a|b>|."""
    if a.amplitudes.size != b.amplitudes.size:
        raise DomainError("states have different dimensions")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)))


def equivalent_up_to_phase(a: PureState, b: PureState, tol: float = ATOL) -> bool:
    return overlap(a, b) >= 1 - tol


def fidelity(target: PureState, actual: PureState | DensityMatrix) -> Fidelity:
    """Fidelity of ``actual`` with a single-qubit pure ``target``.

    Mixed ``actual`` uses the probability convention <target|rho|target>;
    pure ``actual`` uses the overlap magnitude |<actual|target>|.  The two
    differ by a square on pure states, so the convention travels with the value.
    """
    if target.num_qubits != 1:
        raise DomainError("fidelity target must be a single-qubit pure state")
    if actual.num_qubits != 1:
        raise DomainError(f"fidelity needs a single-qubit state, got {actual.num_qubits} qubits")
    if isinstance(actual, DensityMatrix):
        t = target.amplitudes
        val = float(np.vdot(t, actual.entries @ t).real)
        return Fidelity(min(max(val, 0.0), 1.0), PROBABILITY)
    return Fidelity(min(overlap(target, actual), 1.0), OVERLAP)
