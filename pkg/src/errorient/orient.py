"""Noise-aware pulse-variant selection passes.

Two strategies pick the residual-error orientation of each CNOT:

* measurement cancellation -- conjugate the candidate single-qubit residual
  through the Clifford suffix of the circuit; pick an orientation whose
  terminal Pauli is diagonal on every measured wire (a phase on basis states,
  hence invisible to the readout);
* conjugate-pair cancellation -- CNOT pairs sharing (control, target) with a
  control-free interior get opposite-sign control-axis residuals, which cancel
  exactly at second order.

Only the leading-order single-qubit residual is traced; higher-order
remainders are accounted for by full simulation.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

from .circuit import Circuit, op_unitary, with_variants
from .gates import ErrorModel, PulseVariant
from .qmat import NotPauli, PauliString, conjugate_pauli


class _Opaque:
    __slots__ = ()

    def __repr__(self):
        return "Opaque"


#: Sentinel returned by :func:`trace_orientation` when tracing meets a
#: non-Clifford op on the error's support.  Compare with ``is``.
Opaque = _Opaque()


@dataclass(frozen=True)
class ErrorPlacement:
    """A single-qubit Pauli error inserted right after the op at ``op_index``."""

    op_index: int
    qubit: int
    axis: str
    sign: int = 1

    def __post_init__(self):
        if self.axis not in ("X", "Y", "Z"):
            raise ValueError(f"axis must be X, Y, or Z, got {self.axis!r}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class Assignment:
    """Chosen pulse variant for one CNOT, with the reason it was picked."""

    op_index: int
    control: int
    target: int
    variant: PulseVariant
    rationale: str  # measurement-cancel | pair-cancel | default

    def as_dict(self) -> dict:
        d = asdict(self)
        d["variant"] = self.variant.value
        return d


@dataclass(frozen=True)
class OrientationPlan:
    """Total assignment of pulse variants to the CNOTs of one circuit."""

    assignments: tuple[Assignment, ...]

    def variant_map(self) -> dict[int, PulseVariant]:
        return {a.op_index: a.variant for a in self.assignments}

    def to_jsonl(self) -> str:
        return "".join(json.dumps(a.as_dict(), sort_keys=True) + "\n"
                       for a in self.assignments)


def apply_plan(circuit: Circuit, plan: OrientationPlan) -> Circuit:
    return with_variants(circuit, plan.variant_map())


def trace_orientation(circuit: Circuit, placement: ErrorPlacement):
    """Conjugate the placed Pauli through every subsequent op.

    Returns the terminal PauliString, or Opaque when an op on the error's
    support is not Clifford on it.  Ops disjoint from the current support
    commute trivially and are skipped.  Ops are taken at epsilon = 0: the
    pass reasons about ideal propagation of the leading-order residual.
    """
    if not 0 <= placement.op_index < len(circuit.ops):
        raise ValueError(f"op index {placement.op_index} out of range")
    letters = ["I"] * circuit.width
    letters[placement.qubit] = placement.axis
    pauli = PauliString("".join(letters), complex(placement.sign))
    ideal = ErrorModel(0.0)
    for op in circuit.ops[placement.op_index + 1:]:
        if not set(op.qubits) & set(pauli.support):
            continue
        result = conjugate_pauli(op_unitary(op, circuit.width, ideal), pauli)
        if result is NotPauli:
            return Opaque
        pauli = result
    return pauli


def _harmless_at_readout(pauli: PauliString, output_register) -> bool:
    """Diagonal (I or Z) on every measured wire; discarded wires are free.

    A terminal Pauli that only multiplies computational-basis states by phases
    on the output register cannot change the readout, and any unitary confined
    to traced-out wires leaves the reduced output state untouched.
    """
    return all(pauli.letters[q] in ("I", "Z") for q in output_register)


# Candidate variants in deterministic preference order: control placements
# first (X before Y), then the target placement.
_MEASUREMENT_CANDIDATES = (
    (PulseVariant.SK1_XI, "control", "X"),
    (PulseVariant.SK1_YI, "control", "Y"),
    (PulseVariant.SK1_IY, "target", "Y"),
)


def _choose_for_cnot(circuit: Circuit, op_index: int) -> Assignment:
    op = circuit.ops[op_index]
    if circuit.output_register:
        for variant, where, axis in _MEASUREMENT_CANDIDATES:
            qubit = op.control if where == "control" else op.target
            terminal = trace_orientation(circuit, ErrorPlacement(op_index, qubit, axis))
            if terminal is Opaque:
                continue
            if _harmless_at_readout(terminal, circuit.output_register):
                return Assignment(op_index, op.control, op.target, variant,
                                  "measurement-cancel")
    return Assignment(op_index, op.control, op.target, PulseVariant.SK1_XI, "default")


def choose_measurement_orientation(circuit: Circuit) -> OrientationPlan:
    """Per-CNOT variant choice that makes the traced residual invisible at readout.

    Each CNOT tries the available orientations in preference order and keeps
    the first whose terminal Pauli is diagonal on all output wires; CNOTs with
    no qualifying orientation (or with Opaque traces) fall back to the default.
    """
    assignments = tuple(_choose_for_cnot(circuit, i) for i in circuit.cnot_indices)
    return OrientationPlan(assignments)


def find_conjugate_pairs(circuit: Circuit) -> tuple[tuple[int, int], ...]:
    """Greedy left-to-right matching of conjugate CNOT pairs.

    Two CNOTs pair when they share (control, target) and no op strictly
    between them touches the control wire, so a control-axis residual from the
    first commutes across the interior and meets its opposite at the second.
    """
    pairs: list[tuple[int, int]] = []
    used: set[int] = set()
    cnots = circuit.cnot_indices
    for pos, i in enumerate(cnots):
        if i in used:
            continue
        op = circuit.ops[i]
        for j in cnots[pos + 1:]:
            if j in used:
                continue
            partner = circuit.ops[j]
            if (partner.control, partner.target) != (op.control, op.target):
                continue
            interior = circuit.ops[i + 1:j]
            if any(op.control in other.qubits for other in interior):
                continue
            pairs.append((i, j))
            used.update((i, j))
            break
    return tuple(pairs)


def pair_cancel(circuit: Circuit) -> OrientationPlan:
    """Assign the control-X variant and its adjoint across conjugate CNOT pairs.

    The first gate of each pair gets the +X-on-control sequence and the second
    its exact adjoint, so the second-order residuals cancel; unpaired CNOTs
    keep the default variant.
    """
    pairs = find_conjugate_pairs(circuit)
    chosen: dict[int, tuple[PulseVariant, str]] = {}
    for i, j in pairs:
        chosen[i] = (PulseVariant.SK1_XI, "pair-cancel")
        chosen[j] = (PulseVariant.SK1_MXI, "pair-cancel")
    assignments = []
    for i in circuit.cnot_indices:
        op = circuit.ops[i]
        variant, rationale = chosen.get(i, (PulseVariant.SK1_XI, "default"))
        assignments.append(Assignment(i, op.control, op.target, variant, rationale))
    return OrientationPlan(tuple(assignments))


def plan_circuit(circuit: Circuit) -> OrientationPlan:
    """Composite pass: pair cancellation first, then measurement orientation.

    Pair cancellation is local and independent of the measurement basis, so
    paired CNOTs keep their assignments; the measurement pass only decides the
    remaining unpaired ones.
    """
    paired = {a.op_index: a for a in pair_cancel(circuit).assignments
              if a.rationale == "pair-cancel"}
    assignments = []
    for i in circuit.cnot_indices:
        if i in paired:
            assignments.append(paired[i])
        else:
            assignments.append(_choose_for_cnot(circuit, i))
    return OrientationPlan(tuple(assignments))


def plan_table(plan: OrientationPlan) -> str:
    """Human-readable table of a plan (op index, wires, variant, rationale)."""
    header = f"{'op':>4}  {'control':>7}  {'target':>6}  {'variant':<8}  rationale"
    rows = [header, "-" * len(header)]
    for a in plan.assignments:
        rows.append(f"{a.op_index:>4}  {a.control:>7}  {a.target:>6}  "
                    f"{a.variant.value:<8}  {a.rationale}")
    return "\n".join(rows) + "\n"
