"""Running the continuation monitor on a collapsing and an expanding run."""

import io

import numpy as np

from cmclab import (
    AXIAL,
    DiagnosticsCollector,
    GridSpec,
    MonitorConfig,
    continuation_monitor,
    emit_records,
    evolve_states,
    kasner_initial_data,
    parse_records,
)


def main():
    grid = GridSpec.cubic(8)

    def run(t0, t_end):
        # trace_correction projects out the slow tr K drift that long
        # collapse runs otherwise accumulate
        s = kasner_initial_data(AXIAL, t0, grid)
        collector = DiagnosticsCollector()
        collector.add(s)
        for s in evolve_states(s, t_end, solver_tol=1e-11, cfl=0.25,
                               trace_correction=True):
            collector.add(s)
        return collector.records

    # Toward the singularity the lapse-weighted energy accumulates and
    # eventually crosses any fixed threshold.
    records = run(-1.0, -4.0)
    print(f"collapse run: {len(records)} records, "
          f"t from {records[0].t} to {records[-1].t}")
    for r in records[:: len(records) // 6]:
        print(f"  t = {r.t:+.3f}  E_BR = {r.e_br:9.4f}  "
              f"spacetime E = {r.e_br_spacetime:7.4f}  k_ratio = {r.k_ratio:.3f}")

    config = MonitorConfig(lambda_threshold=2.0, t0=-4.5, t_star=-0.5)
    verdict = continuation_monitor(records, config)
    print(f"  energy criterion tripped: {verdict.criterion_energy_blowup}")
    print(f"  ratio criterion tripped:  {verdict.criterion_ratio_blowup}")
    print(f"  clean: {verdict.clean}")

    # Toward t -> 0^- the energy decays and the verdict stays clean.
    records = run(-1.0, -0.5)
    verdict = continuation_monitor(
        records, MonitorConfig(lambda_threshold=2.0, t0=-1.5, t_star=-0.4))
    print(f"\nexpanding run: {len(records)} records, clean: {verdict.clean}")

    # Records serialize with repr floats, so a round trip is bitwise.
    buffer = io.StringIO()
    emit_records(records, buffer)
    buffer.seek(0)
    print(f"round trip equal: {parse_records(buffer) == records}")


if __name__ == "__main__":
    main()
