"""Community-aware immunization strategies, SIR ensembles and LFR graphs."""

from ._core import (
    DataError,
    FeasibilityError,
    Graph,
    LfrResult,
    LouvainResult,
    ParseError,
    Partition,
    SirOutcome,
    acquaintance,
    bhd,
    betweenness,
    cbf,
    chb,
    comm,
    degree,
    estimate_mixing,
    generate_lfr,
    interconnection_density,
    louvain,
    modularity,
    nnc,
    rank,
    relative_difference,
    run_louvain,
    sir_ensemble,
    wchb,
    __version__,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
