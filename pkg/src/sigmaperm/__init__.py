"""Permutability analysis of subgroup families in finite permutation groups."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    CycleParseError,
    DegreeCapError,
    DegreeMismatchError,
    GroupSpecError,
    InvariantViolation,
    NotNormalError,
    OrderCapError,
    ParentMismatchError,
    SigmaError,
    SigmapermError,
    UnknownClaimError,
    WorkLimitError,
)
from .perm import DEGREE_CAP, Permutation, compose, parse_cycles
from .group import (
    DEFAULT_ORDER_CAP,
    ORDER_CAP_ENV,
    FiniteGroup,
    element_order,
    generate_closure,
    is_soluble,
    order_cap,
)
from .lattice import (
    QuotientMap,
    Subgroup,
    SubgroupLattice,
    all_subgroups,
    conjugate_subgroup,
    core,
    cyclic_subgroup,
    intersect,
    join,
    lattice_of,
    load_lattice,
    normal_closure,
    normal_subgroups,
    normalizer,
    permutes,
    product_set,
    quotient,
    save_lattice,
    subgroup_from_indices,
    subgroup_generated,
    trivial_subgroup,
    whole_subgroup,
)
from .pi import (
    PrimeSet,
    gpi_projectors,
    hall_subgroups,
    has_d_pi_property,
    is_nilpotent,
    is_pi_group,
    is_pi_number,
    o_pi,
    o_upper_pi,
    pi_maximal_subgroups,
    prime_support,
    sylow_subgroups,
)
from .sigma import (
    PermutabilityLevel,
    PermutabilityResult,
    PermutabilityWitness,
    SigmaPartition,
    canonicalize_sigma,
    enumerate_sigma_partitions,
    s_permutable,
    sigma_nilpotent,
    sigma_nilpotent_section,
    sigma_permutable,
    sigma_subnormal,
    singleton_partition,
    subnormal_indices,
)
from .harness import (
    CLAIM_IDS,
    CLAIM_TITLES,
    SuiteResult,
    VerificationReport,
    WitnessRecord,
    check_conjecture1,
    reports_to_jsonl,
    run_suite,
    summary_text,
    verify_claim,
    write_report_files,
)
from .catalog import (
    GroupSpec,
    SigmaSpec,
    abelian_invariants,
    build_group,
    catalog,
    format_group_spec,
    parse_group_spec,
    parse_sigma_spec,
)

__all__ = [name for name in dir() if not name.startswith("_")]
