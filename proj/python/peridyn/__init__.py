# SPDX-License-Identifier: MIT
"""Reproducing-kernel collocation for the peridynamic Navier equation.

The compiled extension ``_core`` carries all functionality; this package
re-exports it.  In an installed wheel the extension lives inside the
package; in a build-tree checkout it sits on ``PYTHONPATH`` as a top-level
module.
"""

try:
    from peridyn._core import *  # noqa: F401,F403
    from peridyn._core import __version__  # noqa: F401
except ImportError:  # build-tree layout
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
