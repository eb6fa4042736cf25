"""Simulation and analysis toolkit for an engineered Kerr nonlinearity in a
pair of resonant nanomechanical modes coupled to a driven charge qubit:
truncated Fock-space operators, the Hamiltonian approximation chain, open-
system evolution, and Yurke-Stoler cat-state figures of merit."""

__version__ = "0.1.0"

from .analysis import fidelity, overlap, purity, reduce_subsystem, trace_distance, yurke_stoler
from .config import ExperimentConfig, default_config, load_config
from .evolution import (
    EvolutionResult,
    LindbladModel,
    evolve_lindblad,
    evolve_unitary_static,
    evolve_unitary_timedep,
    kerr_analytic_pure,
    kerr_lindblad_analytic,
)
from .fock import (
    HilbertSpace,
    Operator,
    QuantumState,
    annihilation,
    beam_splitter_map,
    beam_splitter_unitary,
    coherent_state,
    creation,
    default_truncation,
    make_space,
    number_op,
    product_state,
    qubit_operator,
)
from .hamiltonians import (
    DispersiveParams,
    ModelParams,
    PhysicalParams,
    RegimeWarning,
    build_dispersive,
    build_full_lab,
    build_kerr_effective,
    build_normal_mode,
    build_rwa,
    derive_qubit_params,
)

__all__ = [
    "__version__",
    "HilbertSpace",
    "Operator",
    "QuantumState",
    "make_space",
    "annihilation",
    "creation",
    "number_op",
    "qubit_operator",
    "coherent_state",
    "product_state",
    "beam_splitter_map",
    "beam_splitter_unitary",
    "default_truncation",
    "PhysicalParams",
    "ModelParams",
    "DispersiveParams",
    "RegimeWarning",
    "derive_qubit_params",
    "build_full_lab",
    "build_rwa",
    "build_dispersive",
    "build_normal_mode",
    "build_kerr_effective",
    "LindbladModel",
    "EvolutionResult",
    "evolve_unitary_static",
    "evolve_unitary_timedep",
    "evolve_lindblad",
    "kerr_analytic_pure",
    "kerr_lindblad_analytic",
    "yurke_stoler",
    "fidelity",
    "purity",
    "overlap",
    "trace_distance",
    "reduce_subsystem",
    "ExperimentConfig",
    "default_config",
    "load_config",
]
