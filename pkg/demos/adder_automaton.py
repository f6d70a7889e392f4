"""Build the automata behind recognizable addition.

For a quadratic expansion the graph of addition is recognizable: the
three normalization passes each define a two-track relation accepted by
a finite automaton, and composing them with the digit-sum relation and
projecting the intermediate tracks yields one deterministic automaton
accepting conv(rho(M), rho(N), rho(M+N)) and nothing else.
"""

from ostrowski import ContinuedFraction, convolve, encode
from ostrowski.recognizers import build_adder, build_pass_automaton, build_valid_rep

golden = ContinuedFraction.from_text("1;(1)")
m = golden.parameters().m

valid = build_valid_rep(golden)
print("valid representations:", valid)
for pass_no in (1, 2, 3):
    aut = build_pass_automaton(golden, pass_no)
    print(f"pass-{pass_no} relation:   ", aut)

adder = build_adder(golden)
print("composed adder:       ", adder)
print()

for a, b in [(2, 3), (10, 9), (88, 99)]:
    word = convolve(
        [encode(golden, a).digits, encode(golden, b).digits, encode(golden, a + b).digits], m
    )
    wrong = convolve(
        [encode(golden, a).digits, encode(golden, b).digits, encode(golden, a + b + 1).digits], m
    )
    print(f"{a} + {b} = {a + b}:  correct track {adder.accepts(word)},"
          f"  off-by-one track {adder.accepts(wrong)}")

print()
print("interchange format preview:")
print("\n".join(adder.to_text().splitlines()[:8]))
