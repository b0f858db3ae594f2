"""Time the compiled and pure-Python simulation kernels on the same scenario.

    python3 benchmarks/bench_kernel.py [--repeat N] [--energy J]

Both backends must produce bit-identical output; the script checks that
before reporting timings.
"""
import argparse
import sys
import time

from orange_range import kernel
from orange_range.core import AncillaryPowerModel, BatteryModel, LossFractions, RobotParams
from orange_range.profiles import PiecewiseLinear
from orange_range.simulator import Scenario, run


def scenario(energy_j: float) -> Scenario:
    robot = RobotParams(12.0, 0.08, 0.4, LossFractions(eta2_drive_motor=0.15, eta3_mechanical=0.1))
    return Scenario(
        robot,
        BatteryModel(energy_j),
        AncillaryPowerModel(s0_w=2.0, s1_w_per_hz=0.05, f_s_hz=30),
        grade_profile=PiecewiseLinear((0.0, 200.0, 600.0, 5000.0), (0.0, 0.05, -0.02, 0.01)),
        disturbance_profile=PiecewiseLinear((0.0, 300.0, 5000.0), (0.0, 4.0, 1.0)),
        duty_pattern=(8.0, 2.0),
    )


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--energy", type=float, default=20_000.0, help="battery energy in J (sets run length)")
    args = parser.parse_args()

    if kernel.compiled_integrate is None:
        sys.exit("compiled kernel not built; reinstall without ORANGE_NO_EXTENSION")

    s = scenario(args.energy)
    t_py, r_py = best_of(lambda: run(s, integrate=kernel.python_integrate), args.repeat)
    t_c, r_c = best_of(lambda: run(s, integrate=kernel.compiled_integrate), args.repeat)
    identical = r_py.true_range_m == r_c.true_range_m and r_py.telemetry == r_c.telemetry

    print(f"steps            {r_c.steps}")
    print(f"range            {r_c.true_range_m:.3f} m")
    print(f"python kernel    {t_py:.3f} s")
    print(f"compiled kernel  {t_c:.3f} s")
    print(f"speedup          {t_py / t_c:.1f}x")
    print(f"bit-identical    {identical}")
    if not identical:
        sys.exit(1)


if __name__ == "__main__":
    main()
