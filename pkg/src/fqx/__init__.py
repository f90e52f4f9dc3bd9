"""Exact arithmetic and density experiments for matrices over GF(q)[x].

The package is organized bottom-up: :mod:`fqx.gf` (finite fields),
:mod:`fqx.poly` (the polynomial ring and its canonical enumeration),
:mod:`fqx.matrix` (minors, Smith form, unimodular completion),
:mod:`fqx.density` (closed-form rational densities and bounds),
:mod:`fqx.experiment` (exhaustive censuses and seeded Monte Carlo) and
:mod:`fqx.cli` (the ``fqx`` command).  The names most callers need are
re-exported here.
"""

from .density import (
    DivisibleBound,
    as_ratio_string,
    density_coprime_to,
    density_unimodular,
    divisible_bound,
    tail_bound,
    zeta_inverse,
    zeta_inverse_truncated,
)
from .errors import BudgetExceededError, FieldMismatchError, ParseError
from .experiment import (
    CSV_COLUMNS,
    DEFAULT_CENSUS_BUDGET,
    CensusResult,
    MCEstimate,
    Predicate,
    SpaceSpec,
    census_matches_closed_form,
    closed_form_count,
    convergence_report,
    exhaustive_census,
    monte_carlo,
    predicate_holds,
    sample_matrix,
    wilson_halfwidth,
    write_rows_csv,
)
from .gf import (
    MAX_FIELD_ORDER,
    FieldElement,
    FieldSpec,
    elem_from_index,
    elem_to_index,
    factor_prime_power,
    field_from_order,
    make_field,
)
from .matrix import (
    IrreducibleSet,
    PolyMatrix,
    QuotientElement,
    QuotientField,
    complete_to_invertible,
    count_full_rank,
    determinant,
    is_coprime_to,
    is_unimodular,
    matrix_from_json,
    matrix_to_json,
    maximal_minors,
    minors_gcd,
    parse_matrix,
    rank_over_field,
    reduce_mod,
    render_matrix,
    smith_invariants,
    smith_normal_form,
    stack,
)
from .poly import (
    DEFAULT_ENUM_BUDGET,
    IrreducibleTable,
    Poly,
    constant,
    count_irreducibles,
    digits_to_index,
    divides,
    gcd,
    gen,
    index_to_digits,
    irreducibles_up_to,
    is_irreducible,
    monic_of_degree,
    one,
    poly_from_index,
    poly_from_indices,
    poly_from_string,
    poly_to_index,
    poly_to_pretty,
    poly_to_string,
    xgcd,
    zero,
)

__version__ = "0.1.0"
