"""Covariant quantum Markov semigroups from unital completely positive maps."""
from .channels import (ChoiMatrix, QuantumChannel, apply_heisenberg, choi_matrix,
                       compose, kraus_from_choi, random_unital_cp, validate_channel)
from .covariance import GroupRep, check_covariance, covariant_dilation, twirl
from .errors import (CQMSError, NoAncillaRepError, NotCovariantError, NotCPError,
                     NotEquivalentError, NotUnitalError)
from .imprimitivity import (PVM, WeylSI, canonical_si, find_intertwiner,
                            standard_weyl_pair, verify_si)
from .qms import LindbladGenerator, evolve, fixed_point_space, lindblad_apply
from .stinespring import DilationResult, dilate, kernel_gram, verify_dilation

__version__ = "0.1.0"
