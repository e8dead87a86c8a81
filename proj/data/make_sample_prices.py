"""Regenerate sample_prices_synthetic.csv.

Synthetic data: 1000 daily log returns drawn by `stablefit simulate` from the stable law
(alpha, beta, gamma, delta) = (1.2, 0.1, 0.015, 0.0025), seed 2018, accumulated into
closing prices starting at 100 on 2015-01-01. Not market data.

    python3 data/make_sample_prices.py build/tools/stablefit > data/sample_prices_synthetic.csv
"""

import datetime
import math
import subprocess
import sys


def main() -> None:
    exe = sys.argv[1]
    out = subprocess.run(
        [exe, "simulate", "--alpha", "1.2", "--beta", "0.1", "--gamma", "0.015",
         "--delta", "0.0025", "--n", "1000", "--seed", "2018"],
        check=True, capture_output=True, text=True).stdout
    returns = [float(v) for v in out.split()]
    day = datetime.date(2015, 1, 1)
    log_price = math.log(100.0)
    print("Date,Close")
    print(f"{day.isoformat()},{math.exp(log_price):.10g}")
    for r in returns:
        day += datetime.timedelta(days=1)
        log_price += r
        print(f"{day.isoformat()},{math.exp(log_price):.10g}")


if __name__ == "__main__":
    main()
