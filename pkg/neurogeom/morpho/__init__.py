from .ensemble_object import *
from .displacement import *

"""
ensemble_object: Surface_Ensemble and its manifest and packed NGEN1 formats.

displacement: templates, displacement fields and scalar annotated mesh export.
"""
