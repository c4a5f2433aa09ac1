"""
Fault signatures of an induction generator
==========================================

Each mechanical or electrical fault modulates the stator current and shows up
as a pair of sidebands around the 50 Hz supply line. This script evaluates the
classical signature formulas for the default 4 kW machine and lists the four
reference scenarios used by the benchmark.
"""

from hrfault import (
    MachineParams,
    bearing_freqs,
    broken_rotor_freqs,
    canonical_scenarios,
    eccentricity_freqs,
    misalignment_freqs,
)

machine = MachineParams()
print(machine)

# Sidebands for the first few harmonic indices. Negative branches fold back to
# positive frequencies, which is where a real spectrum shows them.
for k in (1, 3, 5):
    print(f"k={k}")
    print("  broken rotor bars :", "%.3f / %.3f" % broken_rotor_freqs(machine, k))
    print("  outer race        :", "%.3f / %.3f" % bearing_freqs(machine, k, "outer"))
    print("  inner race        :", "%.3f / %.3f" % bearing_freqs(machine, k, "inner"))
    print("  misalignment      :", "%.3f / %.3f" % misalignment_freqs(machine, k))
    print("  eccentricity      :", "%.3f / %.3f" % eccentricity_freqs(machine, k))

# The reference scenarios are stored as literals. Two of them do not follow
# from the formulas: the broken-rotor k=3 line sits at 70.83 Hz instead of
# 70.875 Hz, and the inner-bearing line 367.74 Hz is |2 f_i - f0|.
for scn in canonical_scenarios():
    lines = ", ".join(f"{t.frequency:.2f} Hz ({t.amplitude:g} A)" for t in scn.sidebands)
    print(f"{scn.name:14s} fundamental {scn.fundamental.frequency:g} Hz, sidebands {lines}")
