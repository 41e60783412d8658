from nanoshuttle.analysis import build_peak_report
from nanoshuttle.schemas import DeviceModel, SweepConfig, SweepDirection
from nanoshuttle.transport import simulate_drain_sweep

model = DeviceModel(noise_enabled=False)
sweeps = {
    "forward": SweepConfig(v_start=0.0, v_end=0.6),
    "reverse": SweepConfig(v_start=0.0, v_end=-0.45, direction=SweepDirection.DOWN),
}

for name, sweep in sweeps.items():
    try:
        report = build_peak_report(simulate_drain_sweep(model, sweep))
    except Exception as e:
        print(f"{name}: ERROR: {e}")
        continue
    print(f"{name}: {len(report.peaks)} picos, umbral {report.threshold_V} V, E_c {report.Ec_estimate} meV")
    for index, levels in report.assigned_states[:3]:
        print(f"  {report.peaks[index].voltage:+.3f} V -> {', '.join(l.label for l in levels) or '-'}")
