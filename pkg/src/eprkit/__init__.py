"""EPR channel maps from antilinear Hilbert-Schmidt maps, and teleportation.

Subpackages follow the layers of the construction::

    linalg      tensor products, partial traces, roots, norms, fidelity
    antilinear  antilinear maps and their composition rules
    smap        s-maps / j-maps of bipartite vectors, Schmidt form
    channel     channel maps of bipartite density operators and duals
    teleport    outcome maps t_i and teleportation runs
    modular     twisted doubles, modular conjugation J, Delta, S
    states      Bell / Werner fixtures and seeded random generators
    io, cli     eprkit/1 files and the command-line harness
"""
from .antilinear import AntilinearMap, adjoint, apply, compose_anti_anti
from .channel import (
    ChannelMap,
    apply_channel,
    channel_from_density,
    dual_channel,
    lueders_update,
)
from .linalg import (
    PureState,
    fidelity,
    matrix_sqrt,
    partial_trace,
    tensor,
    trace_norm,
)
from .modular import modular_conjugation, modular_operator, s_operator, twisted_tensor
from .smap import (
    EntanglementClass,
    entanglement_class,
    polar_jmaps,
    schmidt,
    smap_from_vector,
)
from .states import bell_basis, bell_state, haar_unitary, random_density, random_pure, werner
from .teleport import MeasurementBasis, run_protocol, teleport_map

__version__ = "0.1.0"
