"""Exact-arithmetic engine for rational-function-valued Euler classes,
Hilbert series of weighted graded modules, trajectory differentials with the
splitting-formula check, and the algebraic dynamical zeta function."""

from .exactnum import (INFINITE_VALUATION, MonoidSeries, Poly, RatFn, Rational,
                       critical_value, pole_clear, series_exp, valuation)
from .cohring import (CohClass, CohRing, SplitBundle, ch, ctop, det_class,
                      integrate, lambda_t, ring_pn, ring_product, sym_series,
                      todd)
from .eulereng import (EulerSeriesClass, SectionData, eu_global, eu_reduced,
                       eu_refined_zero, eu_series, sym_rationality_check)
from .gradedmod import (BettiTable, GradedPolyRing, HilbertSeries,
                        hilbert_brute_force, hilbert_from_betti,
                        koszul_resolution)
from .trajcalc import (CurveClassMonoid, LocalizedZeroRecord, TrajDataset,
                       ZeroSet, assemble_d, compose_convolution, contract_f,
                       d_square_relation, product_field_zeros, specialize,
                       splitting_check, zeta)

__version__ = "0.1.0"
