"""Order finding and factoring for products of two distinct Fermat primes.

The package covers the whole pipeline: exact number theory for the ten
composites built from the primes 3, 5, 17, 257, 65537 (`numtheory`), the
classical compression that collapses modular exponentiation to a handful
of CNOTs (`compression`), an exact dense statevector simulator with the
standard and compressed circuit builders (`simulator`), the closed-form
measurement distribution used as an independent oracle (`analytic`), and
end-to-end factoring runs with failure classification and the |+>-input
coherence check (`shor`).  A CLI frontend lives in `cli`.
"""

from .analytic import AnalyticDistribution, analytic_distribution, peak_positions, prob_x
from .compression import (
    CircuitClass,
    CompressionMap,
    build_compression_map,
    circuit_class,
    is_trivial_failure_base,
    table_assignments,
    trivial_failure_bases,
)
from .numtheory import (
    FERMAT_PRIMES,
    FermatProduct,
    Fraction,
    as_product,
    compute_l_max,
    convergents,
    coprime_bases,
    fermat_number,
    fermat_products,
    gcd,
    mod_pow,
    multiplicative_order,
    order_exponents,
    reduce_fraction,
    totient_bruteforce,
    totient_semiprime,
)
from .shor import (
    CoherenceReport,
    OrderResult,
    RunRecord,
    choose_base,
    extract_order,
    factor,
    postprocess,
    verify_coherence,
)
from .simulator import (
    Circuit,
    Gate,
    RegisterLayout,
    StateVector,
    apply_gate,
    apply_permutation_oracle,
    build_compressed_circuit,
    build_copy_circuit,
    build_standard_circuit,
    build_verification_circuit,
    circuit_from_json,
    circuit_to_json,
    dephased_cnot_distribution,
    first_register_distribution,
    initial_state,
    inverse_qft,
    run_circuit,
    sample,
)

__version__ = "0.1.0"
