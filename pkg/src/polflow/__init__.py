"""Fisher-metric gradient flow of the polarization measure on the simplex.

The toolkit covers the discrete polarization index and its cubic
generalizations, the Fisher information metric in solid coordinates with
its closed-form inverse, natural-gradient flow integration with
fixed-point classification, the three-draw exponential family with toric
border evaluation, Lotka-Volterra and replicator dynamics in three
charts, metric derivatives along paths, and a velocity index for time
series of distributions.
"""

__version__ = "0.1.0"

from .errors import (BoundaryState, DimensionMismatch, InvalidDistribution,
                     InvalidStep, NoConvergence, NonPositiveState, NotAFixedPoint,
                     NotInterior, NotOnFacet, OutOfPolytope, PolflowError,
                     UnsupportedDimension)
from .simplex import (EtaCoords, SimplexPoint, TangentVector, ThetaCoords,
                      eta_to_point, eta_to_projective, eta_to_theta,
                      point_to_eta, point_to_projective, point_to_theta,
                      projective_to_eta, projective_to_point, score_of_path,
                      theta_to_eta, theta_to_point)
from .fisher import (FisherMatrix, dI_dtheta, facet_rank, fisher_eta,
                     fisher_inverse_det, fisher_inverse_entries,
                     fisher_inverse_eta, precision_dI_product, precision_entries,
                     precision_identity_check)
from .indices import (POL_COEFFS, CubicConditionReport, CubicIndexCoeffs,
                      cubic_conditions, cubic_index_eta, grad_pol_eta, pol,
                      pol_eta)
from .natgrad import (VectorField, cubic_field, cubic_natgrad_n2, jacobian_fd,
                      jacobian_natgrad_pol_n2, natgrad_pol_n2, natural_gradient,
                      pol_euclidean_field, pol_field)
from .flow import (BasinMap, FixedPointReport, TrajectoryRecord, basin_map,
                   classify, find_fixed_points, integrate, newton_fixed_point)
from .expfam import (CountTable, TripleSampleTable, border_pol_expectation,
                     build_triple_table, count_table, expectation_params,
                     pol_expectation_theta, polarization_cells, psi,
                     psi_uniform_ref, toric_probability)
from .replicator import (FitnessSpec, LVParams, ReplicatorTrajectory,
                         integrate_lv, integrate_replicator, lv_conserved,
                         lv_field, lv_field_n, lv_fitness, lv_uplift,
                         replicator_field, replicator_in_parametrization,
                         replicator_velocity, uplift_inverse)
from .connection import FramedField, covariance_along_path, geodesic, metric_derivative
from .timeseries import (DistributionSeries, VelocityIndexReport,
                         VelocityStepRecord, alignment, analyze_series,
                         estimate_velocity, index_gradient_tangent)
