"""
Hyper - Quadratic Euler characteristics of smooth (weighted) hypersurfaces and their cones
"""
import logging
import math
from dataclasses import dataclass
from functools import reduce
from typing import Any, Dict, List, Optional

from errors import NotSmoothError, OddRankPrimitiveError, WeightsInvalidError
from gw import GWClass, gw_scale
from jacobian import (
    JacobianRing,
    build_jacobian,
    graded_piece,
    jacobian_form_primitive,
    primitive_degrees,
)
from poly import Poly, WeightedRing, format_poly

logger = logging.getLogger(__name__)


@dataclass
class HypersurfaceData:
    """Smooth hypersurface {F = 0} of dimension n in P(a_0, ..., a_{n+1})"""
    ring: WeightedRing
    F: Poly
    dim: int
    jacobian: JacobianRing

    @property
    def e(self) -> int:
        return self.jacobian.e

    @property
    def weights(self):
        return self.ring.weights

    @property
    def weight_product(self) -> int:
        return math.prod(self.ring.weights)

    @property
    def is_weighted(self) -> bool:
        return any(a != 1 for a in self.ring.weights)


def make_hypersurface(F: Poly, n: Optional[int] = None) -> HypersurfaceData:
    """
    Validate F and wrap it with its Jacobian ring

    Args:
        F: weighted-homogeneous polynomial in n+2 variables
        n: hypersurface dimension (defaults to number of variables - 2)

    Returns:
        HypersurfaceData: validated hypersurface
    """
    ring = F.ring
    if n is None:
        n = ring.nvars - 2
    if n < 0 or ring.nvars != n + 2:
        raise WeightsInvalidError(f"a hypersurface of dimension {n} needs {n + 2} variables, got {ring.nvars}")
    if reduce(math.gcd, ring.weights) != 1:
        raise WeightsInvalidError(f"weights {ring.weights} are not coprime")
    J = build_jacobian(F)
    lcm = reduce(lambda a, b: a * b // math.gcd(a, b), ring.weights)
    if J.e % lcm:
        raise WeightsInvalidError(f"degree {J.e} is not divisible by lcm{ring.weights} = {lcm}")
    if not J.is_smooth():
        raise NotSmoothError(f"{format_poly(F)} does not define a smooth hypersurface")
    return HypersurfaceData(ring, F, n, J)


def weighted_smoothness_warnings(H: HypersurfaceData) -> List[str]:
    """
    Heuristic checks for smoothness of Y itself in weighted projective space

    Only a quasi-smooth Y is verified elsewhere; these flag the usual ways a
    weighted hypersurface picks up quotient singularities.
    """
    warnings: List[str] = []
    if not H.is_weighted:
        return warnings
    weights = H.ring.weights
    if H.dim >= 3:
        for i in range(len(weights)):
            for j in range(i + 1, len(weights)):
                if math.gcd(weights[i], weights[j]) != 1:
                    warnings.append(f"weights a_{i}={weights[i]} and a_{j}={weights[j]} are not coprime")
    for i, a in enumerate(weights):
        if H.e % a:
            continue
        exps = [0] * len(weights)
        exps[i] = H.e // a
        if tuple(exps) not in H.F.terms:
            warnings.append(f"no pure power {H.ring.variables[i]}^{H.e // a} in F")
    for w in warnings:
        logger.warning("weighted smoothness: %s", w)
    return warnings


def primitive_dimensions(H: HypersurfaceData) -> List[int]:
    """dim J_{(q+1)e - |a|} for q = 0..n, zero for negative degrees"""
    total = sum(H.weights)
    return [graded_piece(H.jacobian, (q + 1) * H.e - total).dim if (q + 1) * H.e - total >= 0 else 0
            for q in range(H.dim + 1)]


def chi_smooth(H: HypersurfaceData) -> GWClass:
    """
    Quadratic Euler characteristic chi(Y/k)

    n even: <e * prod a_i> + (n/2) H + <-e> * q_prim.
    n odd: ((n + 1 - rank q_prim) / 2) H, with q_prim checked to be hyperbolic.

    Args:
        H: smooth hypersurface

    Returns:
        GWClass: chi over the field of F
    """
    field = H.ring.field
    q_prim = jacobian_form_primitive(H.jacobian, H.dim)
    if H.dim % 2:
        if not q_prim.is_hyperbolic_multiple():
            raise OddRankPrimitiveError(f"primitive form {q_prim} of an odd-dimensional hypersurface is not hyperbolic")
        return GWClass.hyperbolic_form(field, (H.dim + 1 - q_prim.rank) // 2)
    leading = GWClass.rank_one(field.coerce(H.e * H.weight_product))
    middle = GWClass.hyperbolic_form(field, H.dim // 2)
    return leading + middle + gw_scale(field.coerce(-H.e), q_prim)


def chi_c_cone(base: HypersurfaceData) -> GWClass:
    """chi_c of the projective cone over base: <1> + <-1> * chi(base)"""
    field = base.ring.field
    return GWClass.one(field) + gw_scale(-field.one(), chi_smooth(base))


def hodge_rank_oracle(H: HypersurfaceData) -> int:
    """(n + 1) + (-1)^n * sum_q dim J_{(q+1)e - |a|}, from the Hilbert function alone"""
    sign = -1 if H.dim % 2 else 1
    return (H.dim + 1) + sign * sum(primitive_dimensions(H))


def hypersurface_report(H: HypersurfaceData, cone: bool = False) -> Dict[str, Any]:
    """JSON report: input echo, Hilbert data, primitive dims, chi and warnings"""
    J = H.jacobian
    warnings = weighted_smoothness_warnings(H)
    chi = chi_smooth(H)
    report: Dict[str, Any] = {
        'field': str(H.ring.field),
        'vars': list(H.ring.variables),
        'weights': list(H.weights),
        'poly': format_poly(H.F),
        'degree': H.e,
        'dim': H.dim,
        'socle_degree': J.socle_degree,
        'hilbert_function': J.hilbert_function(),
        'primitive_degrees': primitive_degrees(J, H.dim),
        'primitive_dims': primitive_dimensions(H),
        'hodge_rank': hodge_rank_oracle(H),
        'chi': chi.to_dict(),
        'warnings': warnings,
    }
    if cone:
        report['chi_c_cone'] = chi_c_cone(H).to_dict()
    return report


if __name__ == "__main__":
    from scalars import FieldId
    ring = WeightedRing(FieldId.rationals(), ('x0', 'x1', 'x2', 'x3'), (1, 1, 1, 1))
    xs = [ring.gen(i) for i in range(4)]
    cubic = make_hypersurface(sum((x ** 3 for x in xs[1:]), xs[0] ** 3))
    print(f"cubic surface: chi = {chi_smooth(cubic)}, Hodge rank {hodge_rank_oracle(cubic)}")
    plane = WeightedRing(FieldId.rationals(), ('x', 'y', 'z'), (1, 1, 1))
    x, y, z = (plane.gen(i) for i in range(3))
    quartic = make_hypersurface(x ** 4 + y ** 4 + z ** 4)
    print(f"plane quartic: chi = {chi_smooth(quartic)}, Hodge rank {hodge_rank_oracle(quartic)}")
    print(f"cone over the plane quartic: chi_c = {chi_c_cone(quartic)}")
