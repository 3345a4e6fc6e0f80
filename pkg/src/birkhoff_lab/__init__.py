"""Exact Birkhoff spectra over subshifts of finite type.

Library surface: exact quadratic-field values, validated shift spaces,
periodic-orbit spectra with classification, extremal averages by
min-mean-cycle, coboundary certificates, witness-producing number theory,
and exact orbit gluing.  The command line lives in birkhoff_lab.cli.
"""

from .core import (
    BiInfiniteWord,
    CylinderDistance,
    FieldValue,
    Observable,
    PeriodicOrbit,
    Roof,
    Sft,
    admissible_words,
    cylinder_distance,
    full_shift,
    golden_mean_shift,
    parse_field_value,
    parse_word,
    ratio_is_rational,
    validate_sft,
)
from .orbits import (
    ArithmeticVerdict,
    Classification,
    DensityProbe,
    FlowEntry,
    SpectrumEntry,
    SpectrumReport,
    arithmetic_test,
    birkhoff_sum,
    classify_observable,
    cyclic_window_sum,
    density_probe,
    enumerate_primitive_orbits,
    flow_spectrum,
    spectrum,
    spectrum_growth,
)
from .meanpath import (
    AverageDensity,
    MeanCycleResult,
    average_spectrum_density,
    extremal_mean_cycle,
    mean_gap_certificate,
)
from .livsic import (
    ApproximateLivsicReport,
    BoundednessVerdict,
    CoboundaryCertificate,
    ConstantCohomology,
    ViolatingCycle,
    approximate_livsic_check,
    boundedness_verdict,
    check_certificate,
    coboundary_observable,
    cohomologous_to_constant,
    solve_coboundary,
)
from .numtheory import (
    IndependenceVerdict,
    NonArithmeticShift,
    RationalRelation,
    asymptotic_independence,
    dispersion_witness,
    equidist_witness,
    find_beta,
    find_nonarithmetic_beta,
    lattice_gap,
    pigeonhole_density,
    stern_brocot_rationals,
)
from .gluing import (
    CorrectionTerm,
    GluedOrbit,
    GluingRow,
    HitResult,
    bridge_words,
    glue_orbits,
    hit_target,
    junction_correction,
    verify_gluing_estimate,
)
from . import errors

__version__ = "0.1.0"
