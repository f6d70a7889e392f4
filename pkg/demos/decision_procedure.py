"""Decide first-order sentences over (N, +, V).

V maps a number to the smallest convergent denominator appearing in its
representation (and 0 to 1).  Sentences compile to automata; truth is
automaton emptiness, so every sentence gets a definite answer.
"""

from ostrowski import ContinuedFraction, decide, enumerate_solutions

golden = ContinuedFraction.from_text("1;(1)")
sqrt2 = ContinuedFraction.from_text("1;(2)")

sentences = [
    "A x. A y. x + y = y + x",
    "E x. ~ x = 0 & x + x = x",
    "A x. E y. (x = y + y) | (x = y + y + 1)",
    "A x. E y. V(x) = y",
    "E x. V(x) = x & x + x = 10",
]

for cf, name in [(golden, "golden [1;(1)]"), (sqrt2, "sqrt2-like [1;(2)]")]:
    print(f"over {name}:")
    for text in sentences:
        print(f"  {text!r:55} -> {decide(cf, text)}")
    print()

print("fixpoints of V up to 60 over the golden expansion (Fibonacci numbers):")
print(" ", sorted(s[0] for s in enumerate_solutions(golden, "V(x) = x", 60)))
print("over [1;(2)] (Pell denominators):")
print(" ", sorted(s[0] for s in enumerate_solutions(sqrt2, "V(x) = x", 60)))
