"""Network-coding protection of n link-disjoint connections against a single relay failure."""
import logging

from .gfield import (
    FieldElement,
    FieldSpec,
    SingularMatrixError,
    field_add,
    field_inv,
    field_mul,
    field_pow,
    gaussian_solve,
    make_field,
)
from .npsim import (
    FailureScenario,
    Packet,
    RoundPlan,
    SessionReport,
    UnprotectableError,
    classify_failure_case,
    inject_node_failure,
    make_packets,
    run_session,
    schedule_rounds,
)
from .protcode import (
    DataCorruptionError,
    ProtectionMatrix,
    RecoverabilityReport,
    UnrecoverableError,
    build_coefficient_matrix,
    decode,
    encode_round,
    field_size_bounds,
    verify_recoverability,
)
from .scenario import Scenario, ScenarioError, dump_scenario, parse_scenario
from .topology import (
    Network,
    PathActivity,
    TopologyError,
    build_network,
    max_relay_degree,
    node_relay_degree,
    normalized_capacity,
    paths_through,
)

__version__ = "0.1.0"

logging.getLogger("npst").addHandler(logging.NullHandler())
