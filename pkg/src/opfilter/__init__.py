"""Operator perspectives, geometric means, CP maps and Lieb-Ruskai maps,
with randomized Loewner-order verification suites."""
from .cpmaps import CPMap, ChoiMatrix, apply, choi, kraus_from_choi, partial_trace_map, random_cp, tensor_with_identity
from .errors import (
    ConfigError,
    DomainViolation,
    EmptyInput,
    FlagViolation,
    NonConvergence,
    NotCP,
    NumericalFailure,
    ShapeError,
    SingularNormalization,
)
from .hermitian import (
    LoewnerVerdict,
    SpectralDecomposition,
    apply_spectral,
    congruence,
    eigh,
    loewner_geq,
    random_contraction,
    random_pd,
    tensor,
)
from .lieb_ruskai import block_embed, lr_basic, lr_n, lr_weighted
from .means import MeanSpec, binary_geometric, inductive_mean, karcher_mean
from .perspectives import perspective, restrict
from .regular_maps import OperatorMapDescriptor, catalog, get_map, probe_curvature

__version__ = "0.1.0"
