"""
Sweep executor: loads a mesh and runs single evaluations, frequency sweeps
and oracle references, producing result rows for CSV output.
"""
import logging
import os
import time
from typing import List, Optional, Sequence

from common import IntegrandKind, IntegrandSpec, IntegrateRow, OracleRow, RunSettings, SweepRow, TransfiniteBlend
from src.core.errors import ContractError, QuadratureError
from src.core.geometry import Mesh, load_mesh
from src.core.integrands import make_integrand, validate_integrand_domain
from src.core.levin_multivariate import integrate_mesh
from src.core.oracle import oracle_2d, oracle_helmholtz_boundary, reference_value
from src.utils.data_handler import DataHandler

logger = logging.getLogger("sweep_executor")


class SweepExecutor:
    """Runs Levin integrations over one mesh."""

    def __init__(self, settings: RunSettings, handler: Optional[DataHandler] = None):
        """
        Initialize the executor.

        Args:
            settings: Validated solver, oracle and thread settings
            handler: CSV writer (optional, will create one if not provided)
        """
        self.settings = settings
        self.handler = handler or DataHandler()
        self.mesh: Optional[Mesh] = None

    def load_mesh(self, mesh_file: str, blend: TransfiniteBlend = TransfiniteBlend.PROJECTION) -> Mesh:
        """
        Load and validate a mesh file.

        Raises:
            FileNotFoundError: If mesh_file does not exist
            MeshParseError / GeometryError: On invalid content
        """
        if not os.path.isfile(mesh_file):
            raise FileNotFoundError(f"mesh file not found: {mesh_file}")
        with open(mesh_file, "r") as f:
            self.mesh = load_mesh(f.read(), blend)
        logger.info(f"Loaded mesh from {mesh_file} ({len(self.mesh)} elements)")
        return self.mesh

    def _require_mesh(self) -> Mesh:
        if self.mesh is None:
            raise ValueError("No mesh loaded. Call load_mesh first.")
        return self.mesh

    def integrate(self, spec: IntegrandSpec) -> IntegrateRow:
        """One Levin evaluation; time_ms covers integrate_mesh only."""
        mesh = self._require_mesh()
        validate_integrand_domain(spec, mesh)
        osc = make_integrand(spec)
        start = time.perf_counter()
        result = integrate_mesh(mesh, osc, self.settings.levin, self.settings.threads)
        elapsed = 1e3 * (time.perf_counter() - start)
        logger.info(f"{osc.name}: {result.value:.16g} (estimate {result.error_estimate:.2e}) in {elapsed:.1f} ms")
        return IntegrateRow(
            value_re=result.value.real,
            value_im=result.value.imag,
            err_est=result.error_estimate,
            n_leaves=result.n_leaves,
            n_boundary_segments=result.n_boundary_segments,
            svd_calls=result.svd_calls,
            time_ms=elapsed,
        )

    def sweep(self, base: IntegrandSpec, omegas: Sequence[float], with_oracle: bool = False) -> List[SweepRow]:
        """
        One row per frequency. A failing frequency yields a row whose status
        names the error; the sweep continues.
        """
        mesh = self._require_mesh()
        rows = []
        for omega in omegas:
            spec = IntegrandSpec(**{**base.model_dump(), "omega": float(omega)})
            row = SweepRow(omega=float(omega))
            try:
                levin = self.integrate(spec)
                row = row.model_copy(
                    update=dict(
                        value_re=levin.value_re,
                        value_im=levin.value_im,
                        time_ms=levin.time_ms,
                        n_leaves=levin.n_leaves,
                        n_boundary_segments=levin.n_boundary_segments,
                        svd_calls=levin.svd_calls,
                    )
                )
            except QuadratureError as e:
                logger.error(f"omega={omega:g}: {e}")
                rows.append(row.model_copy(update={"status": f"error:{type(e).__name__}"}))
                continue

            if with_oracle:
                try:
                    ref = reference_value(spec, mesh, self.settings.oracle)
                except QuadratureError as e:
                    logger.error(f"omega={omega:g}: oracle failed: {e}")
                    row = row.model_copy(update={"status": f"oracle-error:{type(e).__name__}"})
                    ref = None
                if ref is not None:
                    value = complex(row.value_re, row.value_im)
                    row = row.model_copy(update=dict(ref_re=ref.real, ref_im=ref.imag, abs_err=abs(value - ref)))
            logger.info(f"omega={omega:g}: leaves={row.n_leaves} abs_err={row.abs_err}")
            rows.append(row)
        return rows

    def oracle(self, spec: IntegrandSpec, method: Optional[str] = None) -> OracleRow:
        """
        Reference value alone: 'boundary' (helmholtz only) or '2d'.
        Defaults to boundary for helmholtz and 2d otherwise.
        """
        mesh = self._require_mesh()
        method = method or ("boundary" if spec.kind == IntegrandKind.HELMHOLTZ else "2d")
        start = time.perf_counter()
        if method == "boundary":
            if spec.kind != IntegrandKind.HELMHOLTZ:
                raise ContractError("the boundary oracle applies to the helmholtz integrand only")
            value = oracle_helmholtz_boundary(mesh, spec.omega, self.settings.oracle)
        else:
            validate_integrand_domain(spec, mesh)
            value = oracle_2d(mesh, make_integrand(spec), self.settings.oracle)
        elapsed = 1e3 * (time.perf_counter() - start)
        return OracleRow(method=method, ref_re=value.real, ref_im=value.imag, time_ms=elapsed)

    def save_results(self, rows, model, output_file: Optional[str] = None) -> str:
        return self.handler.save_rows(rows, model, output_file)
