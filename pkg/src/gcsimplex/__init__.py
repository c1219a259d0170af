"""Three-state grand-canonical density-matrix model of molecular domains."""
from .descriptors import (
    DescriptorSet,
    EnergyPoint,
    delta_h,
    delta_u,
    descriptor_set,
    edge_energy,
    energy,
    energy_trend_check,
    slope_checks,
)
from .oracle import (
    EnsembleState,
    FockSpaceSpec,
    build_ensemble,
    build_operators,
    purity,
    trace_observable,
)
from .simplex import (
    DomainSpec,
    MixedState,
    Region,
    SimplexPoint,
    WeightVector,
    assemble_state,
    classify,
    mean_particle_number,
    reference_fraction,
    weights_from_omega_n,
    weights_from_reference,
)
from .species_io import SpeciesRecord, parse_catalog, to_domain, write_catalog

__version__ = "0.1.0"
