from . import operations
from .operations import *
