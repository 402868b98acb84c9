"""Convertibility and catalysis of fermionic mode entanglement under local superselection rules."""
from .catalysis import CatalysisResult, CatalystSpec, build_catalyst, search_catalyst, two_orbital_state, wedge_density
from .fock import (
    ModeLayout,
    OccupationState,
    SignedState,
    catalyst_layout,
    enumerate_basis,
    reorder_sign,
    system_layout,
    wedge_layout,
    wedge_state,
)
from .majorization import ProbabilityVector, majorizes, partial_sums_desc
from .operators import DensityOperator, SpectrumResult, fermionic_partial_trace, hermitian_eigenvalues, purity
from .ssr import SectorDecomposition, SectorLabel, SsrKind, decompose, physical_part, sector_of
from .transform import FailingStep, TransformationReport, Verdict, decide, schmidt_vector

__version__ = "0.1.0"
