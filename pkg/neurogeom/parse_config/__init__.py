from .manifest import *
from .commands import *

"""
manifest: Run_Manifest, the flat key = value manifest reader and the table of subcommands.

commands: one function per subcommand, summary rendering and run(), which maps errors to exit codes.
"""
