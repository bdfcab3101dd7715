"""Reference values for the scalar special functions (mpmath, 30 digits)."""
import mpmath as mp

mp.mp.dps = 30


def q(x):
    return mp.erfc(x / mp.sqrt(2)) / 2


def main():
    for x in [0.5, 1.0, 3.0, 10.0, 27.0]:
        print(f"erfc({x}) = {mp.nstr(mp.erfc(x), 17)}   log_erfc = {mp.nstr(mp.log(mp.erfc(x)), 17)}")
    for x in [-2.0, 1.0, 5.0, 40.0]:
        print(f"Q({x}) = {mp.nstr(q(x), 17)}   log_Q = {mp.nstr(mp.log(q(x)), 17)}")
    for nu, x in [(0.5, 1.0), (1.0, 2.0), (2.27, 0.3), (3.5, 7.0)]:
        print(f"K_{nu}({x}) = {mp.nstr(mp.besselk(nu, x), 17)}")
    for z in [mp.mpc(0.3, 0.0), mp.mpc(2.5, 40.0), mp.mpc(-4.2, 3.0), mp.mpc(0.1, -800.0)]:
        v = mp.loggamma(z)
        print(f"loggamma({z}) = {mp.nstr(v.real, 17)} {mp.nstr(v.imag, 17)}")


if __name__ == "__main__":
    main()
