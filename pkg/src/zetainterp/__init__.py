"""Exact q-expansion arithmetic for the theta group, modular integrals and their
Dirichlet-series kernels, and the Fourier interpolation bases attached to the
nontrivial zeros of the Riemann zeta function and Dirichlet L-functions.

Subpackage map:

* ``qseries``      -- exact Laurent series in fractional powers of the nome
* ``modforms``     -- theta, lambda, the Hauptmodul J and its companion, with
                      validated numerical evaluators on the upper half-plane
* ``kernel_forms`` -- the weakly holomorphic coefficient forms of the
                      two-variable modular kernels
* ``alpha``        -- semicircle quadrature for modular-integral coefficients
* ``fastpath``     -- vectorized functional-equation recursion and FFT pipeline
                      for coefficients of large index
* ``analytic``     -- zeta, gamma, Hardy Z, zero tables, Dirichlet characters
* ``kernels``      -- meromorphic Dirichlet-series kernels and basis functions
* ``rvbasis``      -- the sqrt(n) interpolation basis and its partial sums
* ``domain``       -- reduction to the fundamental domain and its statistics
* ``interp``       -- explicit-formula and interpolation-formula verification
* ``service``      -- FastAPI application exposing all of the above
* ``cli``          -- thin command-line client of the service
"""

__version__ = "0.1.0"
