"""Loop extraction and tracking for 3-D point cloud sequences."""

from ._topotrack import *  # noqa: F401,F403
from ._topotrack import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__doc__ = _core_doc or __doc__
