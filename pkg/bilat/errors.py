"""Root of the bilat exception hierarchy."""


class BilatError(Exception):
    """Base class for every error raised deliberately by bilat."""
