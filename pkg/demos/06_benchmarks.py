"""Benchmark suites: GHZ width sweep, heavy-output sampling, model-CLOPS.

All three probe different things: GHZ survival tracks how fast multi-qubit
coherence decays with width, the heavy-output fraction is a quantum-volume-
style whole-stack test, and CLOPS counts circuit layers per wall-clock second
(spoiler: preparation time dominates everything).
"""

from naqsim import builtin_profile, clops_metric, ghz_sweep, qv_heavy_output

profile = builtin_profile("rb87-2023")

print("GHZ survival P(0^n) + P(1^n) under the full noise model:")
report = ghz_sweep(profile, widths=[2, 3, 4, 5, 6], shots=800, seed=11, noise="full")
for record in report.records:
    bar = "#" * int(40 * record.metric)
    print(f"  n = {record.width}: {record.metric:.3f} {bar}")

print("\nQuantum-volume-style heavy output (width = depth = 3):")
qv = qv_heavy_output(profile, width=3, depth=3, n_circuits=10, shots=400, seed=5)
summary = qv.summary
print(f"  mean heavy-output probability: "
      f"{summary['mean_heavy_output_probability']:.3f} "
      f"(threshold {summary['threshold']:.3f}, passed: {summary['passed']})")

print("\nModel-CLOPS (100-layer template):")
for label, prof in (("rb87-2023", profile), ("instant prep", None)):
    if prof is None:
        import dataclasses

        prof = dataclasses.replace(profile, t_prep=0.001)
    clops = clops_metric(prof, template_width=4, template_layers=100, n_shots=10)
    print(f"  {label:>12}: {clops.layers_per_second:8.0f} layers/s "
          f"(t_shot = {clops.timing.t_shot_ms:.3f} ms, host compute "
          f"{clops.host_seconds * 1000:.0f} ms)")

print("\nReports serialize as line-delimited JSON plus a summary:")
print("\n".join(report.to_jsonl().splitlines()[:2] + ["..."]))
