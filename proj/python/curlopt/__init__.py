"""Edge-element curl-curl optimal control: meshes, solvers, estimators, AMR."""

from _curlopt import (  # noqa: F401
    TetMesh,
    bisect_all,
    bisect_marked,
    build_structured_domain,
    cases,
    eoc,
    mesh_quality_stats,
    parse_config,
    run_adaptive,
    run_uniform,
    space_dim,
    ssn_solve,
    topology_counts,
)

__all__ = [
    "TetMesh",
    "bisect_all",
    "bisect_marked",
    "build_structured_domain",
    "cases",
    "eoc",
    "mesh_quality_stats",
    "parse_config",
    "run_adaptive",
    "run_uniform",
    "space_dim",
    "ssn_solve",
    "topology_counts",
]
