from .merge import (
    MERGE_KINDS,
    THETA_TOL,
    acceptable_spans,
    check_theta,
    deviation_bar,
    downward_merge,
    merge,
    merge_path,
    merge_span,
    naive_merge,
)
