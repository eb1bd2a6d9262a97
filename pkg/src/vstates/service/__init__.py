"""HTTP service wrapper around the V-state library."""

from .app import app, create_app, default_r

__all__ = ["app", "create_app", "default_r"]
