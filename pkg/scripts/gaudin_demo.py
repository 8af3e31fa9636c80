"""Build Gaudin Hamiltonians for given poles and verify they Poisson-commute."""
import argparse
from fractions import Fraction

from gaudin_poisson.braiding import diagonal_twist, generic_twist_factors
from gaudin_poisson.brackets import (BracketEngine, GaudinConfig, check_hamiltonian_commutativity,
                                     check_specialization, gaudin_hamiltonians, site_spec)

if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--poles", default="0,1,2")
    p.add_argument("--braided", action="store_true", help="use a diagonal twist and Tr^R")
    p.add_argument("--no-C", action="store_true", help="drop the constant matrix C")
    a = p.parse_args()
    poles = tuple(Fraction(x) for x in a.poles.split(","))
    braiding = diagonal_twist(generic_twist_factors(a.n)) if a.braided else None
    cfg = GaudinConfig(a.n, poles, include_constant_C=not (a.no_C or a.braided))
    H = gaudin_hamiltonians(cfg, braiding)
    for p_, h in enumerate(H, start=1):
        print(f"H({p_}) = {h}")
    engine = BracketEngine(site_spec(cfg, braiding))
    for i in range(len(H)):
        for j in range(i + 1, len(H)):
            print(f"{{H({i + 1}), H({j + 1})}} = {engine(H[i], H[j])}")
    print(check_hamiltonian_commutativity(cfg, braiding))
    print(check_specialization(cfg, braiding))
