"""Error of the estimated instantaneous weights as the series length grows (N=20, P=2)."""

from _common import run

from svardag.simulate import SvarmSpec

if __name__ == "__main__":
    run("samples", (250, 1000, 4000), SvarmSpec(n=20, p=2), __doc__)
