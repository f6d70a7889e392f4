"""Compare Ostrowski numerations across several quadratic expansions.

Every eventually periodic continued fraction gives its own positional
system: the same number has different digit strings, all obeying the
capped-digit rules of the expansion.
"""

from ostrowski import ContinuedFraction, decode, encode

expansions = ["1;(1)", "1;(2)", "0;1,(1,2)", "1;(3,1,2)"]

for spec in expansions:
    cf = ContinuedFraction.from_text(spec)
    params = cf.parameters()
    print(f"expansion {spec}: caps mu={params.mu}, alphabet 0..{params.m}")
    print("  q:", cf.convergent_denominators(8))
    for n in [12, 100, 1000]:
        word = encode(cf, n)
        assert decode(cf, word.digits) == n
        print(f"  rho({n}) = {word}")
    print()
