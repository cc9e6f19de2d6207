from pinn.grid import infer_grid
from pinn.loss import PinnLossTerms, pinn_loss
from pinn.mlp import MlpModel, init_mlp, mlp_field, mlp_forward
from pinn.trainer import train_pinn

__all__ = ["MlpModel", "PinnLossTerms", "infer_grid", "init_mlp", "mlp_field", "mlp_forward", "pinn_loss", "train_pinn"]
