"""Optimal asymmetric quantum cloning machines and their optical realizations.

Three independent routes to the same fidelity trade-offs live here:

* closed-form constructions (``one_to_n``, ``tripartite``),
* eigenvalue optimization over channel operators (``choi``),
* sparse Fock-space simulation of stimulated-emission schemes (``optics``),

plus labeled-tensor utilities (``linalg``, ``symmetric``) and the sweep /
verification layer behind the ``clonebench`` command line tool.
"""

from .linalg import (
    DensityOperator,
    StateVector,
    SubsystemLayout,
    eig_hermitian,
    fidelity_pure,
    fidelity_to_eta,
    haar_random_state,
    haar_random_unitary,
    partial_trace,
    tensor,
)
from .symmetric import CGProjectors, cg_projectors, dicke_state, sym_projector
from .one_to_n import (
    SandwichCloner,
    TradeoffParam,
    analytic_tradeoff,
    build_sandwich,
    estimation_limit,
    frontier_peak_y,
    param_bridge,
)
from .tripartite import (
    analytic_fidelities,
    anticlone_fidelities,
    best_coefficients,
    clone_fidelities,
    coefficients_from_ratios,
    normalize_coefficients,
    output_state,
    symmetric_point,
)
from .choi import (
    ChoiResiduals,
    OptimalCloner,
    apply_choi,
    choi_residuals,
    haar_pair_kernel,
    optimize_cloner,
    sampled_pair_kernel,
    score_operator,
)
from .optics import (
    FockState,
    analytic_11,
    analytic_112,
    beam_splitter,
    mode_fidelity,
    mode_polarization_rdm,
    pair_sector,
    photon_sector,
    polarized_input,
    postselect,
    simulate_11,
    simulate_112,
    simulate_1111,
    split_mode,
    stimulated_pdc,
)
from .sweeps import (
    GridSpec,
    SweepConfig,
    TradeoffRecord,
    evaluate_point,
    frontier_records,
    run_sweep,
    shrinking_factor,
)
from .verify import run_all, run_criterion

__version__ = "0.1.0"
