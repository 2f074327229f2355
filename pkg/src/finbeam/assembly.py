"""Global assembly: internal force vector, tangent stiffness, supports, solve.

Fin-Ray scale models have at most a few hundred DOFs, so the global matrix
is kept dense and factorised directly with partial pivoting.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .corotational import (
    DegenerateElement,
    ElementGeometry,
    LocalForces,
    current_geometry,
    element_tangent_stiffness,
    global_internal_force,
    local_displacements,
    local_forces,
    transformation_matrix,
)
from .model import Structure, SupportSet

# Pivots below this fraction of the largest pivot flag a mechanism or a
# buckled (singular) configuration rather than roundoff.
SINGULAR_PIVOT_RATIO = 1e-12


class SingularMatrix(RuntimeError):
    """The support-modified tangent is singular: mechanism or instability."""


@dataclass(frozen=True)
class ElementState:
    """Per-element geometry and local forces at one displacement state."""

    geometry: ElementGeometry
    forces: LocalForces


def update_member_data(
    structure: Structure,
    displacement: np.ndarray,
) -> tuple[list[ElementState], np.ndarray]:
    """Refresh every element's geometry/local forces and assemble F_int.

    For each element: gather its six DOFs, update the chord geometry, the
    local deformations and local forces, then scatter-add the global
    internal force contribution.
    """
    f_int = np.zeros(structure.n_dof)
    states: list[ElementState] = []
    for index, element in enumerate(structure.elements):
        dofs = structure.element_dofs[index]
        p = displacement[dofs]
        try:
            geometry = current_geometry(element, p)
        except DegenerateElement as exc:
            raise DegenerateElement(f"element {index}: {exc}") from exc
        local = local_displacements(element, p, geometry)
        forces = local_forces(element.props, element.l0, local)
        b = transformation_matrix(geometry)
        f_int[dofs] += global_internal_force(b, forces)
        states.append(ElementState(geometry, forces))
    return states, f_int


def assemble_tangent(
    structure: Structure,
    states: list[ElementState],
) -> np.ndarray:
    """Scatter-add every element tangent into the global matrix K."""
    k = np.zeros((structure.n_dof, structure.n_dof))
    for index, element in enumerate(structure.elements):
        dofs = structure.element_dofs[index]
        state = states[index]
        k_el = element_tangent_stiffness(
            element.props, element.l0, state.geometry, state.forces)
        k[np.ix_(dofs, dofs)] += k_el
    return k


def apply_supports(k: np.ndarray, supports: SupportSet) -> np.ndarray:
    """Row/column elimination for fixed DOFs.

    Constrained rows and columns are zeroed and the diagonal entry set to 1,
    which keeps the system invertible while forcing zero increments at the
    supports. Unconstrained entries are untouched.
    """
    k_s = k.copy()
    dofs = [d for d in supports.constrained_dofs() if d < k.shape[0]]
    if dofs:
        k_s[dofs, :] = 0.0
        k_s[:, dofs] = 0.0
        k_s[dofs, dofs] = 1.0
    return k_s


def solve_linear(k_s: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Direct dense solve of K_s x = rhs with partial pivoting.

    Raises SingularMatrix when any pivot falls below SINGULAR_PIVOT_RATIO
    of the largest pivot, which signals a mechanism or structural
    instability rather than a solvable system.
    """
    with warnings.catch_warnings():
        # the pivot check below raises SingularMatrix instead
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(k_s, check_finite=False)
    pivots = np.abs(np.diag(lu))
    largest = pivots.max() if pivots.size else 0.0
    if largest == 0.0 or pivots.min() < SINGULAR_PIVOT_RATIO * largest:
        raise SingularMatrix(
            f"pivot ratio {pivots.min() / largest if largest else 0.0:.3e} "
            "below threshold; structure is unstable or a mechanism")
    return lu_solve((lu, piv), rhs, check_finite=False)
