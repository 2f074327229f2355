"""Element-level co-rotational beam mechanics.

The motion of each two-node element is split into a rigid rotation of a
local frame that follows the element chord, plus small local deformations
measured in that frame: an axial stretch u_l and two end rotations
(theta_1l, theta_2l). Local constitutive laws then stay linear while the
global kinematics remain exact for arbitrarily large displacements.

All functions are pure; the six nodal displacements enter as
p = [u1, w1, theta1, u2, w2, theta2].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import KIND_PIN, Element, ElementProps


class DegenerateElement(RuntimeError):
    """The two displaced element nodes (nearly) coincide."""


@dataclass(frozen=True)
class ElementGeometry:
    """Current chord length and orientation of a displaced element."""

    length: float
    cos_beta: float
    sin_beta: float

    @property
    def beta(self) -> float:
        return math.atan2(self.sin_beta, self.cos_beta)


@dataclass(frozen=True)
class LocalDisplacements:
    """Deformational part of the element motion, in the local frame."""

    u_l: float
    theta_1l: float
    theta_2l: float


@dataclass(frozen=True)
class LocalForces:
    """Local internal force vector [N, M1, M2]."""

    n_axial: float
    m1: float
    m2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.n_axial, self.m1, self.m2])


def wrap_angle(angle: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    wrapped = math.remainder(angle, math.tau)
    if wrapped <= -math.pi:
        wrapped += math.tau
    return wrapped


def current_geometry(element: Element, displacement: np.ndarray) -> ElementGeometry:
    """Chord length and direction cosines of the displaced element.

    The chord vector is the reference chord plus the relative nodal
    translations; nodal rotations do not move the chord.
    """
    u1, w1, _, u2, w2, _ = displacement
    dx = element.l0 * math.cos(element.beta0) + (u2 - u1)
    dy = element.l0 * math.sin(element.beta0) + (w2 - w1)
    length = math.hypot(dx, dy)
    if length <= 1e-14 * element.l0:
        raise DegenerateElement(
            f"displaced nodes coincide (length {length:.3e} from l0 "
            f"{element.l0:.3e})")
    return ElementGeometry(length, dx / length, dy / length)


def local_displacements(
    element: Element,
    displacement: np.ndarray,
    geometry: ElementGeometry,
) -> LocalDisplacements:
    """Axial stretch and end rotations relative to the rotated chord.

    The rigid rotation beta - beta0 is removed from the nodal rotations;
    the results are wrapped into (-pi, pi] so elements stay valid through
    arbitrarily large rigid turns.
    """
    beta = geometry.beta
    u_l = geometry.length - element.l0
    theta_1l = wrap_angle(displacement[2] + element.beta0 - beta)
    theta_2l = wrap_angle(displacement[5] + element.beta0 - beta)
    return LocalDisplacements(u_l, theta_1l, theta_2l)


def local_forces(
    props: ElementProps,
    l0: float,
    local: LocalDisplacements,
) -> LocalForces:
    """Local internal forces from the local deformations.

    N = E*A*u_l / L0; the end moments follow the linear beam relation
    [M1, M2] = (2*E*I/L0) * [[2, 1], [1, 2]] @ [theta_1l, theta_2l].
    Pin-ended elements carry no end moments.
    """
    n_axial = props.e_modulus * props.area * local.u_l / l0
    if props.kind == KIND_PIN:
        return LocalForces(n_axial, 0.0, 0.0)
    factor = 2.0 * props.e_modulus * props.inertia / l0
    m1 = factor * (2.0 * local.theta_1l + local.theta_2l)
    m2 = factor * (local.theta_1l + 2.0 * local.theta_2l)
    return LocalForces(n_axial, m1, m2)


def transformation_matrix(geometry: ElementGeometry) -> np.ndarray:
    """3x6 matrix B mapping global displacement increments to local ones.

    Row 1 is the axial direction vector r; rows 2 and 3 subtract the chord
    rotation increment from each nodal rotation increment.
    """
    c, s, length = geometry.cos_beta, geometry.sin_beta, geometry.length
    sl = s / length
    cl = c / length
    return np.array([
        [-c, -s, 0.0, c, s, 0.0],
        [-sl, cl, 1.0, sl, -cl, 0.0],
        [-sl, cl, 0.0, sl, -cl, 1.0],
    ])


def global_internal_force(b_matrix: np.ndarray, forces: LocalForces) -> np.ndarray:
    """Global 6-vector of element internal forces, B^T @ [N, M1, M2]."""
    return b_matrix.T @ forces.as_array()


def element_tangent_stiffness(
    props: ElementProps,
    l0: float,
    geometry: ElementGeometry,
    forces: LocalForces,
) -> np.ndarray:
    """Consistent 6x6 tangent: exact Jacobian of the global internal force.

    k = B^T Cl B  +  (N/L) z z^T  +  ((M1+M2)/L^2) (r z^T + z r^T)

    with r the axial direction vector, z its in-plane perpendicular, and Cl
    the local material stiffness. The material part uses the reference
    length L0; the geometric terms use the current length L. For pin-ended
    elements the rotational block of Cl vanishes and M1 = M2 = 0, leaving
    the bar tangent (EA/L0) r r^T + (N/L) z z^T.
    """
    c, s, length = geometry.cos_beta, geometry.sin_beta, geometry.length
    r = np.array([-c, -s, 0.0, c, s, 0.0])
    z = np.array([s, -c, 0.0, -s, c, 0.0])
    b = transformation_matrix(geometry)

    ea_l0 = props.e_modulus * props.area / l0
    if props.kind == KIND_PIN:
        c_local = np.diag([ea_l0, 0.0, 0.0])
    else:
        ei_l0 = props.e_modulus * props.inertia / l0
        c_local = np.array([
            [ea_l0, 0.0, 0.0],
            [0.0, 4.0 * ei_l0, 2.0 * ei_l0],
            [0.0, 2.0 * ei_l0, 4.0 * ei_l0],
        ])

    k = b.T @ c_local @ b
    k += (forces.n_axial / length) * np.outer(z, z)
    k += ((forces.m1 + forces.m2) / length**2) * (np.outer(r, z) + np.outer(z, r))
    return k
