"""videomap: lens-specific maps of video collections.

Frames are embedded under interchangeable lenses, laid out in 2D, and the
resulting geometry drives transition discovery and automatic rough cuts.
"""

__version__ = "0.1.0"
