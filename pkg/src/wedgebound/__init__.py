"""Lower bounds for the first Dirichlet eigenvalue of planar domains in wedges,
reflex angles and cut planes, with a finite-element cross-check."""

from .bounds import (
    BoundReport,
    LemmaGap,
    annular_root_bound,
    annular_root_bound_printed,
    faber_krahn_bound,
    lemma_gap,
    pw_bound,
    reflex_bound,
)
from .eigensolver import EigenEstimate, SlitMesh, build_slit_mesh, lambda1_closed, lambda1_fem, rayleigh_quotient
from .geometry import (
    AnnularSector,
    CircularSector,
    ContainmentReport,
    Disc,
    Domain,
    Polygon,
    Pose,
    WedgeFamily,
    area,
    contains_in_wedge,
    proof_map,
    ray_cast,
    to_wedge_frame,
)
from .moments import QuadratureResult, boundary_moment, moment_mc_oracle, moment_pw, moment_reflex
from .origin_search import PoseSearchResult, optimize_pose
from .special import bessel_j, bessel_y, cross_product_root, first_bessel_zero, gamma

__version__ = "0.1.0"
