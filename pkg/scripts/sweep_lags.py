"""Lag-matrix and instantaneous-weight error against the lag order (N=20, T=4000)."""

from _common import run

from svardag.simulate import SvarmSpec

if __name__ == "__main__":
    run("lags", (1, 2, 3, 4), SvarmSpec(n=20, t=4000), __doc__)
