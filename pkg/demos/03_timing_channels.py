"""Sending timing information through a covariant channel.

A mixture of energy shifts separated by at least N levels leaves the N orbit
states of a superposition perfectly distinguishable; the restricted channel
is then a circulant Hadamard channel and its capacity bound is log2(N) minus
the entropy of the DFT spectrum of the coherence vector.
"""
import numpy as np

import covchan as cc
from covchan import capacity as cap
from covchan import timing as tim

s, N = np.pi, 2

for dim, shifts, label in [
    (4, [(0.0, 0.5), (2.0, 0.5)], "shifts {0, 2}"),
    (5, [(0.0, 0.25), (3.0, 0.75)], "shifts {0, 3}, biased"),
]:
    spectrum = cc.Spectrum(np.arange(float(dim)))
    phi0 = np.zeros(dim, dtype=complex)
    phi0[0] = phi0[1] = np.sqrt(0.5)
    mix = tim.build_shift_mixture(spectrum, shifts)
    defect = tim.is_reliable_timing(mix.channel, spectrum, phi0, s)
    rep = tim.timing_channel(mix.channel, spectrum, phi0, s, N)
    print(f"{label}:")
    print(f"  orthogonality defect {defect:.2e}")
    print(f"  v = {np.round(rep.v, 6)}")
    print(f"  q = {np.round(rep.q, 6)}")
    print(f"  capacity bound {rep.bound:.6f} bits")
    # consistency with the circulant mask picture
    hb = cap.hadamard_bound(tim.circulant(rep.v), N)
    print(f"  circulant Hadamard bound {hb:.6f} bits")
    print()

# Adjacent shifts sit exactly on a zero of the coherence vector: v(s) = 0 at
# s = pi, and the timing channel carries nothing.
dist = cc.EnergyShiftDistribution(pairs=((0.0, 0.5), (1.0, 0.5)))
v = tim.v_from_distribution(dist, s, N)
q = (np.fft.fft(v) / N).real
print("adjacent shifts {0, 1}:")
print(f"  v = {np.round(v, 6)}, bound {tim.spectrum_to_bound(q):.6f} bits")
