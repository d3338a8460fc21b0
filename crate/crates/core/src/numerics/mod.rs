//! Supporting numerical kernels: embedded Runge-Kutta integration, Carlson
//! symmetric elliptic integrals, adaptive Gauss-Kronrod quadrature and a
//! Sturm-bisection tridiagonal eigensolver.

pub mod dopri5;
pub mod elliptic;
pub mod quadrature;
pub mod tridiag;
