from .operators import factor
from .sets import (GeneratedSimplicialSet, Product, Simplex, SimplicialError, SimplicialSet,
                   StandardSimplex, boundary_of_simplex, delta, minimal_circle, point,
                   validate_simplicial_set)
from .groups import (ConstantGroup, PathGroup, SimplicialGroup, TableGroup,
                     simplicial_group_from_json, validate_simplicial_group)
from .bundles import (BundleClass, GroupValuedMap, TwistedCartesianProduct, TwistingFunction,
                      TwistingFunctionError, bundle_report, check_twisting_function, classify_bundles,
                      enumerate_twisting_functions, extract_twisting_function, theta_act,
                      theta_bundle_map, theta_report, twisted_cartesian_product, twisting_function_report)
from .chains import (chain_complex, ez_contraction, normalized_chains, normalized_group_algebra,
                     shih_model, shuffle_model)
from .wbar import W, WBar, canonical_iso_report, universal_twisting_function, w_as_pairs, w_constructions
from .transfer import (ThetaHomotopy, Transfer, homology_transfer_report, tau_from_rho,
                       theta_to_homotopy, transfer)
