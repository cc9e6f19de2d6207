from optim.adam import AdamState, adam_step
from optim.lbfgs import LbfgsState, lbfgs_step
from optim.params import Params, copy_params, flatten, unflatten

__all__ = ["AdamState", "LbfgsState", "Params", "adam_step", "copy_params", "flatten", "lbfgs_step", "unflatten"]
