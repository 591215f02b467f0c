"""Traffic-probability calculus on labeled graphs, with structural reduction
algorithms and a finite-N random-matrix Monte Carlo laboratory."""

from .caps import CapExceeded, Caps, default_caps
from .graphs import (EdgeAtom, GraphMonomial, GraphPolynomial, MultiDigraph,
                     TestGraph, atom, parse_word, quotient, tilde_delta)
from .connectivity import (bcd_tree, cactus_classify, edge_connectivity,
                           is_quasi_cactus, three_connected_pairs)
from .canonical import anti_isomorphic, canonical_form, is_isomorphic
from .partitions import (SetPartition, bell_number, catalan,
                         enumerate_partitions, is_noncrossing, kreweras,
                         mobius_zero, noncrossing, pair_partitions)
from .operad import (GraphOperation, apply_operation, cdeg, compose,
                     embed_word, gen_monomial, monomial_adjoint,
                     monomial_delta, monomial_hadamard, monomial_product,
                     monomial_transpose, named_operation, permute, rdeg,
                     substitute_edge, unit_monomial, word_monomial)
from .cumulants import (CumulantSpec, MomentOracle, builtin,
                        cumulants_to_moments, moment_cumulants,
                        moments_to_cumulants, table_oracle)
from .states import (GinibreTableSpec, HaarOrthogonalTableSpec,
                     HaarUnitaryTableSpec, UESpec, WignerTableSpec,
                     injective_state, injective_transform,
                     mixed_free_cumulant, pad_weight, trace_psi,
                     traffic_state, ue_spec)

__version__ = "0.1.0"
