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


try:
    from .version import __version__  # Generated by setuptools_scm
except ImportError:
    __version__ = "?"

from .binomial import *
from .budget import *
from .cones import *
from .config import Config
from .dispatcher import *
from .ehrhart import *
from .errors import *
from .fixtures import *
from .genfn import *
from .graphs import *
from .hilbert import *
from .linalg import *
from .search import *
from .symmetry import *
