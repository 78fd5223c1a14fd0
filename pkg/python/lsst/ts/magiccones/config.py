# This file is part of ts_magic_cones
#
# Developed for the LSST Data Management System.
# This product includes software developed by the LSST Project
# (https://www.lsst.org).
# See the COPYRIGHT file at the top-level directory of this distribution
# for details of code ownership.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

import os


class Config:
    budget_seconds = float(os.environ.get("MAGICCONES_BUDGET_SECONDS", "600"))
    """Default wall-clock budget (seconds) for one computation. Taken from
    the ``MAGICCONES_BUDGET_SECONDS`` environment variable when set."""

    max_search_nodes = 200_000_000
    """Maximum number of nodes the lattice point search may visit."""

    max_basis_candidates = 5_000_000
    """Maximum number of parallelepiped points examined while computing
    a Hilbert basis."""

    max_groebner_pairs = 2_000_000
    """Maximum number of S-pairs processed by one Buchberger run."""

    orbit_cap = 2_000_000
    """Default upper bound on the size of an orbit or group closure."""

    toric_max_variables = 24
    """Largest Hilbert basis for which ``hilbert_series`` uses the toric
    ideal pipeline when the method is ``"auto"``."""

    elimination_max_variables = 12
    """Largest number of cone variables accepted by the elimination
    Hilbert basis oracle."""

    series_degree = 16
    """Default number of series coefficients produced by ``expand``."""

    threads = 1
    """Default number of worker processes for the counting search."""
