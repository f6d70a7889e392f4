"""Walk through Zeckendorf addition: the golden-ratio Ostrowski system.

The continued fraction [1;(1)] has Fibonacci numbers as its convergent
denominators, so the Ostrowski representation is the Zeckendorf one:
sums of non-adjacent Fibonacci numbers.  This script encodes a few
numbers, then adds two of them showing every window operation of the
three normalization passes.
"""

from ostrowski import ContinuedFraction, add, decode, encode

golden = ContinuedFraction.from_text("1;(1)")

print("denominators q_0..q_10:", golden.convergent_denominators(10))
print()
for n in [1, 2, 10, 19, 100]:
    print(f"rho({n}) = {encode(golden, n)}")
print()

m_value, n_value = 10, 9
trace = []
result = add(golden, m_value, n_value, trace=trace)
print(f"adding {m_value} + {n_value}:")
print(f"  rho({m_value}) = {encode(golden, m_value)}")
print(f"  rho({n_value}) = {encode(golden, n_value)}")
print()
for step in trace:
    print(" ", step)
print()
print(f"result: {result}  (decodes to {decode(golden, result.digits)})")
