"""Cosserat rod models of defective MEMS beams.

Ideal and first-order defect stiffness of slender rods, reduction to 12x12
end-point components, and an independent 1-D beam FEM used to check them.
"""

__version__ = "0.1.0"

from .rod import (  # noqa: E402
    InvalidGeometryError,
    Material,
    RectangleSection,
    RodSpec,
    SectionMoments,
    StiffnessTensors,
    Strip,
    section_moments,
    silicon,
    skew,
    stiffness_tensors,
)
from .ideal import DOF_LABELS, EndDisplacement, ideal_stiffness, solve_ideal  # noqa: E402
from .defects import (  # noqa: E402
    AmplitudeCapError,
    DefectProfile,
    make_blob,
    make_jitter,
    make_nick,
    moment_functionals,
    sample_jitter_realization,
)
from .perturbation import defect_energy, residual_check, solve_correction  # noqa: E402
from .component import (  # noqa: E402
    ComponentModel,
    assemble_component,
    defect_stiffness,
    export_component,
    load_component,
    modal_estimate,
)
from .fem import build_mesh, lowest_frequency_fem  # noqa: E402
from .verification import CaseSpec, compare_cases, extrapolate, benchmark_cases  # noqa: E402
