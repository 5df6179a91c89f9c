"""Cost surveys over the canonical-gate tetrahedron.

Every row reports, for one interaction vector theta, the direct sampling
weight W, the per-factor legacy cost prod_k (1 + 2|sin 2 t_k|), and the
gate-based cost G = (sum |u_a|)^2. G <= W <= legacy holds pointwise, with
W = legacy exactly when at most one component is nonzero.

Sweeps enumerate the lattice {linspace(0, pi/4, m)}^3 restricted to
t1 >= t2 >= t3 in lexicographic index order. Boundary points that are
locally equivalent to each other (different theta, same gate up to local
rotations) are reported as distinct rows; no deduplication is attempted.

The weight maximum is located by a coarse grid (which includes the
t1 = pi/4 face, where the maximum lives) followed by Nelder-Mead refinement
from the best grid points. W is invariant under coordinate permutations, so
the box-constrained search is equivalent to the tetrahedron search and the
refined point is sorted into canonical order.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from math import pi, sin

import numpy as np
from scipy.optimize import minimize

from .canonical import ThetaVector, pauli_coefficients
from .circuit import gate_based_cost
from .decomposition import weight_formula


@dataclass(frozen=True)
class SweepRow:
    theta1: float
    theta2: float
    theta3: float
    w: float
    legacy: float
    g: float

    def to_dict(self) -> dict:
        return {
            "theta1": self.theta1,
            "theta2": self.theta2,
            "theta3": self.theta3,
            "W": self.w,
            "legacy": self.legacy,
            "G": self.g,
        }


def compare_costs(theta: ThetaVector | tuple[float, float, float]) -> SweepRow:
    """W, legacy, and G at one point."""
    t = ThetaVector.coerce(theta)
    u = pauli_coefficients(t)
    legacy = 1.0
    for angle in t:
        legacy *= 1.0 + 2.0 * abs(sin(2.0 * angle))
    return SweepRow(
        theta1=t.theta1,
        theta2=t.theta2,
        theta3=t.theta3,
        w=weight_formula(u),
        legacy=legacy,
        g=gate_based_cost(u),
    )


def sweep(points_per_axis: int) -> list[SweepRow]:
    """All lattice points of the tetrahedron at the given axis resolution."""
    if points_per_axis < 2:
        raise ValueError("need at least 2 points per axis")
    values = np.linspace(0.0, pi / 4.0, points_per_axis)
    rows = []
    for i1 in range(points_per_axis):
        for i2 in range(i1 + 1):
            for i3 in range(i2 + 1):
                rows.append(compare_costs((values[i1], values[i2], values[i3])))
    return rows


def find_max_w(grid_points: int = 50, restarts: int = 3) -> tuple[ThetaVector, float]:
    """Locate the weight maximum over the tetrahedron.

    Grid stage: >= 50 points per axis including the t1 = pi/4 face.
    Refinement: derivative-free Nelder-Mead from the ``restarts`` best grid
    points, box-bounded to [0, pi/4]^3, simplex tolerance below 1e-8.
    """
    if grid_points < 50:
        raise ValueError("grid must have at least 50 points per axis")
    if restarts < 1:
        raise ValueError("need at least one refinement start")
    values = np.linspace(0.0, pi / 4.0, grid_points)

    def objective(t: np.ndarray) -> float:
        return -weight_formula(pauli_coefficients(t))

    scored: list[tuple[float, tuple[float, float, float]]] = []
    for i1 in range(grid_points):
        for i2 in range(i1 + 1):
            for i3 in range(i2 + 1):
                point = (values[i1], values[i2], values[i3])
                scored.append((objective(point), point))
    scored.sort(key=lambda item: item[0])

    best_w = -np.inf
    best_t = np.array(scored[0][1])
    for _, start in scored[:restarts]:
        result = minimize(
            objective,
            np.array(start),
            method="Nelder-Mead",
            bounds=[(0.0, pi / 4.0)] * 3,
            options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": 5000},
        )
        if -result.fun > best_w:
            best_w = -result.fun
            best_t = result.x
    ordered = np.sort(best_t)[::-1]
    return ThetaVector(*ordered), float(best_w)


def rows_to_csv(rows: list[SweepRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["theta1", "theta2", "theta3", "W", "legacy", "G"])
    for row in rows:
        writer.writerow([row.theta1, row.theta2, row.theta3, row.w, row.legacy, row.g])
    return buffer.getvalue()


def rows_to_json(rows: list[SweepRow]) -> list[dict]:
    return [row.to_dict() for row in rows]
