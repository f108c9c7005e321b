"""Photon band structure and the mediated spin-spin rate.

Two single-mode cavities exchange photons at rate Jc, so the ring carries
two normal modes at omega_c +/- 2*Jc. Driving the atoms far below both
modes leaves the photons virtual; second-order exchange through each mode
adds up to an Ising rate J_z between the atoms. This script prints the
band, the per-mode detunings, the closed-form rate in both normalization
conventions, and the rate recovered numerically from the full model's
accumulated two-atom phase.

Run from the repo root:  python demos/01_dispersion_and_rates.py
"""

import numpy as np

from cavity_ising import (calibrate_jz_report, cavity_dispersion,
                          effective_jz, hopping_matrix, reference_params)

params = reference_params(n_max=2)
print("benchmark point (units GHz, time ns):")
print(f"  N={params.N} ring, g={params.g}, Omega={params.Omega}, "
      f"Jc={params.Jc}, omega_c - omega_L = {params.omega_c - params.omega_L}")

print("\nphoton hopping matrix (GHz):")
print(hopping_matrix(params))

spectrum = cavity_dispersion(params)
print("\nnormal-mode band omega_k = omega_c + 2 Jc cos(2 pi m / N):")
for m, mode in enumerate(spectrum.modes):
    print(f"  mode m={m}: omega_k = {mode.omega_k:.4f}, detuning from "
          f"drive delta_k = {mode.delta_k:+.4f}")

# closed-form second-order rate, two bookkeeping conventions
lit = effective_jz(params, "paper_literal")
norm = effective_jz(params, "normalized")
print("\nclosed-form J_z (g^2/4) sum_k cos(k) / delta_k:")
print(f"  per-ring total (both links of the two-site ring): {lit:.6e} GHz")
print(f"  per-site normalized (divided by N):               {norm:.6e} GHz")

# independent numeric extraction: evolve the full model over a short
# window, fit the accumulated phase pattern on the two-atom basis
cal = calibrate_jz_report(params)
print("\ncalibration against the full model:")
print(f"  fitted J_z = {cal.jz:.6e} GHz "
      f"({cal.samples_used} samples over {cal.window_ns:.0f} ns, "
      f"residual {cal.residual_rms:.1e} rad)")
print(f"  single-site z rates: {np.array(cal.epsilon)} "
      f"(analytic estimate g^2/(8 Omega) = {params.g**2 / 8 / params.Omega:.3e})")
print(f"  closest convention: {cal.convention} "
      f"(off by {abs(cal.jz / norm - 1):.2e} relative)")

print("\nso the fitted rate matches the per-site normalized convention;")
print("one phase-gate period pi/J_z is "
      f"{np.pi / cal.jz:.0f} ns at this point.")
