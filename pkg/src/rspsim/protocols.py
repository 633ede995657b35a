"""Branch-by-branch drivers for the remote state preparation protocols.

Every driver evolves the full register (Alice's qubits, Bob's qubit and any
ancilla) through each measurement branch with exact probabilities.  Qubit
layout per protocol:

* explicit / improved2: 0 = Alice, 1 = Bob, 2 = Bob's ancilla
* improved1 / appendixB: 0 = Alice, 1 = Bob
* ghz: 0, 1 = Alice's two particles, 2 = Bob
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import DomainError
from .qcore import (
    CNOT, H, OVERLAP, PROBABILITY, X, Z, DensityMatrix, Gate, PovmElement, PureState,
    TargetQubit, apply_gate, apply_povm_element, fidelity, measure_enumerate, overlap,
    partial_trace,
)
from .regionsched import (
    LOWER, QUARTER_PI, RegionIndex, ancilla_param, channel_for_region, check_q,
    explicit_chi, locate_region, schedule_value,
)
from .resources import CompressionPlan, channel_ratio, improved1_min_fidelity

__all__ = [
    "BranchRecord", "FidelityReport", "ProtocolOutcome", "MonteCarloReport",
    "PROTOCOLS", "explicit_alice_unitary", "central_alice_unitary", "ghz_rotation",
    "ghz_corrections", "appendixB_povm", "section_povm", "phi_basis_coefficients",
    "run_explicit", "run_improved1_central", "run_appendixB_central", "run_improved2",
    "run_ghz", "run_protocol", "run_monte_carlo",
]

PROTOCOLS = ("explicit", "improved1", "appendixB", "improved2", "ghz")


@dataclass(frozen=True)
class BranchRecord:
    bits: tuple[int, ...]  # classical bits Alice sends on this branch
    probability: float
    state: PureState | DensityMatrix | None  # Bob's final state; None on failure
    fidelity: float | None
    success: bool = True
    label: str = ""
    cbits: int = -1  # defaults to len(bits)

    def __post_init__(self):
        if self.cbits < 0:
            object.__setattr__(self, "cbits", len(self.bits))


@dataclass(frozen=True)
class FidelityReport:
    protocol: str
    simulated_fidelity: float
    analytic_fidelity: float | None
    convention: str
    branches: tuple[BranchRecord, ...]
    chi: float | None = None

    @property
    def total_probability(self) -> float:
        return sum(b.probability for b in self.branches)

    @property
    def worst_case_fidelity(self) -> float:
        return min(b.fidelity for b in self.branches if b.success and b.probability > 0)

    @property
    def mean_fidelity(self) -> float:
        """Probability-weighted fidelity over successful branches."""
        ok = [b for b in self.branches if b.success and b.probability > 0]
        w = sum(b.probability for b in ok)
        return sum(b.probability * b.fidelity for b in ok) / w


@dataclass(frozen=True)
class ProtocolOutcome:
    report: FidelityReport
    rho_B: DensityMatrix | None = None
    success_probability: float | None = None  # probabilistic protocols only
    analytic_success_probability: float | None = None
    details: dict[str, Any] = field(default_factory=dict)


# -- operators ------------------------------------------------------------

def explicit_alice_unitary(phi: float) -> Gate:
    e = np.exp(1j * phi)
    return Gate(np.array([[1, e], [e.conjugate(), -1]]) / math.sqrt(2), "U_explicit")


def central_alice_unitary(theta: float, phi: float) -> Gate:
    c, s, e = math.cos(theta), math.sin(theta), np.exp(1j * phi)
    return Gate([[c, s * e], [s * e.conjugate(), -c]], "U_central")


def ghz_rotation(theta: float) -> Gate:
    c, s = math.cos(theta), math.sin(theta)
    return Gate([[c, -s], [s, c]], "U_ghz")


def ghz_corrections(phi: float, k: int) -> tuple[Gate, Gate]:
    """(Alice's second-particle unitary, Bob's unitary) after first outcome ``k``."""
    e = np.exp(1j * phi)
    if k == 0:
        return Gate([[1, 0], [0, -e]], "U_A0"), Gate(np.eye(2), "U_B0")
    return Gate([[0, 1], [e, 0]], "U_A1"), Gate([[0, 1], [1, 0]], "U_B1")


def _diag_pair(d0: float, d1: float, names: tuple[str, str]) -> tuple[PovmElement, PovmElement]:
    # complementary element sqrt(I - M0^2) for a real diagonal M0
    c0 = math.sqrt(max(1 - d0 * d0, 0.0))
    c1 = math.sqrt(max(1 - d1 * d1, 0.0))
    return PovmElement(np.diag([d0, d1]), names[0]), PovmElement(np.diag([c0, c1]), names[1])


def appendixB_povm(theta: float, upper: bool = False) -> tuple[PovmElement, PovmElement]:
    """Bob's filter turning the partner state back into the target.

    Lower half uses diag(1, tan^2 theta); upper half diag(cot^2 theta, 1).
    """
    if upper:
        cot2 = (math.cos(theta) / math.sin(theta)) ** 2
        return _diag_pair(cot2, 1.0, ("M0'", "M1'"))
    return _diag_pair(1.0, math.tan(theta) ** 2, ("M0", "M1"))


def section_povm(B: float, C: float, P: float) -> tuple[PovmElement, PovmElement]:
    """Alice's local filter taking |00> + B|11> to |00> + C|11> with probability P."""
    scale = math.sqrt((B * B + 1) / (C * C + 1)) * math.sqrt(P)
    return _diag_pair(scale, scale * C / B, ("M_k0", "M_k1"))


def phi_basis_coefficients(rho: DensityMatrix, target: TargetQubit) -> np.ndarray:
    """rho in the {|phi>, |phi_bar>} basis: [[C0, C2], [C3, C1]]."""
    basis = np.column_stack([target.state.amplitudes, target.partner.amplitudes])
    return basis.conj().T @ rho.entries @ basis


def _bob_ket(state: PureState, bob: int) -> PureState:
    """Bob's pure state once every other qubit has collapsed to a basis state."""
    n = state.num_qubits
    psi = np.moveaxis(state.amplitudes.reshape([2] * n), bob, 0).reshape(2, -1)
    col = np.argmax(np.linalg.norm(psi, axis=0))
    return PureState(psi[:, col])


# -- explicit scheme ------------------------------------------------------

def _explicit_branches(target: TargetQubit, channel: PureState, region: RegionIndex, q: float):
    """Alice's U, measurement, Bob's sigma_z and CNOT-with-ancilla on a ready channel."""
    anc = ancilla_param(target.theta, region, q)
    reg = PureState(np.kron(channel.amplitudes, anc.state.amplitudes))
    reg = apply_gate(reg, explicit_alice_unitary(target.phi), 0)
    out = []
    for br in measure_enumerate(reg, 0):
        if br.state is None:
            continue
        s = br.state
        if br.outcome == 1:
            s = apply_gate(s, Z, 1)
        s = apply_gate(s, CNOT, (1, 2))
        out.append((br.outcome, br.probability, partial_trace(s, 1)))
    return anc, out


def _explicit_report(target, q, region, branches, protocol, scale=1.0, extra=()):
    records = [
        BranchRecord((bit,), scale * p, rho, fidelity(target.state, rho).value, label=f"a={bit}")
        for bit, p, rho in branches
    ]
    records.extend(extra)
    w = sum(p for _, p, _ in branches)
    rho_B = DensityMatrix(sum(p * rho.entries for _, p, rho in branches) / w)
    chi = explicit_chi(target.theta, region, q)
    report = FidelityReport(
        protocol, fidelity(target.state, rho_B).value, 1 / (1 + chi), PROBABILITY,
        tuple(records), chi,
    )
    return report, rho_B


def run_explicit(target: TargetQubit, q: float, depth: int, region: RegionIndex | None = None,
                 lower_family_only: bool = False) -> ProtocolOutcome:
    """Deterministic 1-cbit preparation with one non-maximally entangled channel per region.

    ``region`` overrides the default lookup (useful for probing a shared
    boundary from the other side).  With ``lower_family_only`` upper-half
    channels are produced from the lower family by sigma_x on both qubits.
    """
    check_q(q)
    if region is None:
        region = locate_region(target.theta, q, depth)
    ch = channel_for_region(region, q, lower_family_only)
    channel = ch.stored_state
    if ch.flipped:
        channel = apply_gate(apply_gate(channel, X, 0), X, 1)
    anc, branches = _explicit_branches(target, channel, region, q)
    report, rho_B = _explicit_report(target, q, region, branches, "explicit")
    return ProtocolOutcome(report, rho_B, details={
        "region": region, "t": ch.t, "ancilla": anc,
        "coefficients": phi_basis_coefficients(rho_B, target),
    })


# -- central region with a maximally entangled pair -----------------------

def _check_central(target: TargetQubit, q: float, depth: int) -> float:
    check_q(q)
    gap = schedule_value(q, depth)
    if not (QUARTER_PI - gap <= target.theta <= QUARTER_PI + gap):
        raise DomainError(
            f"theta={target.theta!r} outside the central region "
            f"[{QUARTER_PI - gap:.12g}, {QUARTER_PI + gap:.12g}] for depth {depth}"
        )
    return gap


def _central_branches(target: TargetQubit):
    bell = PureState([1, 0, 0, 1])
    reg = apply_gate(bell, central_alice_unitary(target.theta, target.phi), 0)
    out = []
    for br in measure_enumerate(reg, 0):
        s = br.state
        if br.outcome == 1:
            s = apply_gate(s, Z, 1)
        out.append((br.outcome, br.probability, s))
    return out


def run_improved1_central(target: TargetQubit, q: float, depth: int) -> ProtocolOutcome:
    """Maximally entangled fallback inside the central gap.

    Bob keeps whatever arrives: the target on outcome 0, the partner
    sin(theta)|0> + cos(theta) e^{i phi}|1> on outcome 1.
    """
    _check_central(target, q, depth)
    records = []
    for bit, p, s in _central_branches(target):
        bob = _bob_ket(s, 1)
        records.append(BranchRecord((bit,), p, bob, overlap(target.state, bob), label=f"a={bit}"))
    worst = min(r.fidelity for r in records)
    report = FidelityReport("improved1", worst, math.sin(2 * target.theta), OVERLAP, tuple(records))
    return ProtocolOutcome(report, details={"fidelity_bound": improved1_min_fidelity(q, depth)})


def run_appendixB_central(target: TargetQubit, q: float, depth: int) -> ProtocolOutcome:
    """Probabilistic exact variant: Bob filters the partner branch with a POVM."""
    _check_central(target, q, depth)
    theta = target.theta
    upper = theta > QUARTER_PI
    m0, m1 = appendixB_povm(theta, upper)
    records = []
    for bit, p, s in _central_branches(target):
        if bit == 0:
            bob = _bob_ket(s, 1)
            records.append(BranchRecord((0,), p, bob, overlap(target.state, bob), label="a=0"))
            continue
        for elem, ok in ((m0, True), (m1, False)):
            p_e = float(np.vdot(s.amplitudes, np.kron(np.eye(2), elem.effect()) @ s.amplitudes).real)
            if p_e < 1e-15:
                records.append(BranchRecord((1,), 0.0, None, None, ok, f"a=1 {elem.name}"))
                continue
            _, post = apply_povm_element(s, elem, 1)
            if ok:
                bob = _bob_ket(post, 1)
                records.append(BranchRecord((1,), p * p_e, bob, overlap(target.state, bob),
                                            label=f"a=1 {elem.name}"))
            else:
                records.append(BranchRecord((1,), p * p_e, None, None, False, f"a=1 {elem.name}"))
    succ = sum(r.probability for r in records if r.success)
    t2 = math.tan(theta) ** 2 if not upper else (math.cos(theta) / math.sin(theta)) ** 2
    report = FidelityReport("appendixB", min(r.fidelity for r in records if r.success and r.probability > 0),
                            1.0, OVERLAP, tuple(records))
    return ProtocolOutcome(report, success_probability=succ, analytic_success_probability=(1 + t2) / 2,
                           details={"povm": (m0, m1), "min_success_bound": 1 / ((2 * q - 1) ** depth + 1)})


# -- compressed channels --------------------------------------------------

def run_improved2(target: TargetQubit, plan: CompressionPlan, q: float | None = None) -> ProtocolOutcome:
    """Explicit scheme fed by a compressed channel set.

    The section head's channel |00> + B|11> is filtered by Alice's local
    POVM into the region's channel with probability P; a failed filter is
    recorded as a failure branch and not assigned a fidelity.
    """
    q = plan.q if q is None else q
    if abs(q - plan.q) > 1e-15:
        raise DomainError(f"q={q!r} does not match the plan's q={plan.q!r}")
    region = locate_region(target.theta, q, plan.N)
    f = region.n + 1  # channel index serving region n
    sec = plan.section_for_channel(f)
    B, C = sec.B, channel_ratio(q, f)
    mk0, mk1 = section_povm(B, C, plan.P)
    stored = PureState([1, 0, 0, B])
    p_ok, channel = apply_povm_element(stored, mk0, 0)
    if region.half != LOWER:
        channel = apply_gate(apply_gate(channel, X, 0), X, 1)
    # Alice's single message still goes out on a failed filter
    extra = [BranchRecord((), max(1 - p_ok, 0.0), None, None, False, "M_k1", cbits=1)]
    anc, branches = _explicit_branches(target, channel, region, q)
    report, rho_B = _explicit_report(target, q, region, branches, "improved2", scale=p_ok, extra=extra)
    return ProtocolOutcome(report, rho_B, success_probability=p_ok, analytic_success_probability=plan.P,
                           details={"region": region, "section": sec, "channel_index": f,
                                    "min_fidelity_bound": q * plan.P,
                                    "success_fidelity": p_ok * report.simulated_fidelity})


# -- GHZ, two cbits -------------------------------------------------------

def run_ghz(target: TargetQubit) -> ProtocolOutcome:
    """Exact preparation from a GHZ state with two classical bits."""
    theta, phi = target.theta, target.phi
    reg = apply_gate(PureState([1, 0, 0, 0, 0, 0, 0, 1]), ghz_rotation(theta), 0)
    expected_pair = np.array([math.cos(theta), 0, 0, math.sin(theta) * np.exp(1j * phi)])
    records, intermediate = [], []
    for b1 in measure_enumerate(reg, 0):
        ua, ub = ghz_corrections(phi, b1.outcome)
        s = apply_gate(apply_gate(b1.state, ua, 1), ub, 2)
        pair = np.moveaxis(s.amplitudes.reshape(2, 2, 2), 0, -1).reshape(4, 2)[:, b1.outcome]
        intermediate.append(float(abs(np.vdot(expected_pair, pair / np.linalg.norm(pair)))))
        s = apply_gate(s, H, 1)
        for b2 in measure_enumerate(s, 1):
            if b2.state is None:
                continue
            fin = apply_gate(b2.state, Z, 2) if b2.outcome == 1 else b2.state
            bob = _bob_ket(fin, 2)
            records.append(BranchRecord((b1.outcome, b2.outcome), b1.probability * b2.probability,
                                        bob, overlap(target.state, bob),
                                        label=f"k={b1.outcome} m={b2.outcome}"))
    report = FidelityReport("ghz", min(r.fidelity for r in records), 1.0, OVERLAP, tuple(records))
    return ProtocolOutcome(report, details={"intermediate_overlap": tuple(intermediate)})


# -- dispatch and sampling ------------------------------------------------

def run_protocol(protocol: str, target: TargetQubit, *, q: float | None = None, depth: int | None = None,
                 plan: CompressionPlan | None = None) -> ProtocolOutcome:
    if protocol == "explicit":
        return run_explicit(target, q, depth)
    if protocol == "improved1":
        return run_improved1_central(target, q, depth)
    if protocol == "appendixB":
        return run_appendixB_central(target, q, depth)
    if protocol == "improved2":
        if plan is None:
            raise DomainError("improved2 needs a compression plan")
        return run_improved2(target, plan)
    if protocol == "ghz":
        return run_ghz(target)
    raise DomainError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")


@dataclass(frozen=True)
class MonteCarloReport:
    protocol: str
    trials: int
    seed: int
    labels: tuple[str, ...]
    cbits: tuple[int, ...]
    exact_probabilities: tuple[float, ...]
    counts: tuple[int, ...]
    fidelities: tuple[float | None, ...]

    @property
    def frequencies(self) -> tuple[float, ...]:
        return tuple(c / self.trials for c in self.counts)

    @property
    def mean_fidelity(self) -> float:
        """Empirical mean fidelity over sampled successful branches."""
        num = den = 0
        for c, f in zip(self.counts, self.fidelities):
            if f is not None:
                num += c * f
                den += c
        return num / den if den else float("nan")

    def max_sigma_deviation(self) -> float:
        """Largest |frequency - p| in units of the binomial standard deviation."""
        worst = 0.0
        for c, p in zip(self.counts, self.exact_probabilities):
            sd = math.sqrt(p * (1 - p) / self.trials)
            dev = abs(c / self.trials - p)
            worst = max(worst, dev / sd if sd > 0 else (0.0 if dev == 0 else math.inf))
        return worst


def run_monte_carlo(protocol: str, target: TargetQubit, *, trials: int, seed: int,
                    q: float | None = None, depth: int | None = None,
                    plan: CompressionPlan | None = None) -> MonteCarloReport:
    """Sample measurement branches ``trials`` times with a seeded generator."""
    if protocol not in PROTOCOLS:
        raise DomainError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")
    if trials < 1:
        raise DomainError(f"trials={trials!r} must be >= 1")
    outcome = run_protocol(protocol, target, q=q, depth=depth, plan=plan)
    branches = outcome.report.branches
    p = np.array([b.probability for b in branches])
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(branches), size=trials, p=p / p.sum())
    counts = np.bincount(draws, minlength=len(branches))
    return MonteCarloReport(
        protocol, int(trials), int(seed),
        tuple(b.label for b in branches), tuple(b.cbits for b in branches),
        tuple(float(x) for x in p), tuple(int(c) for c in counts),
        tuple(b.fidelity if b.success else None for b in branches),
    )
