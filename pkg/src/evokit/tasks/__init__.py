from .addition import AdditionTask, make_addition_batch
from .cartpole import CartPoleSwingUp, cartpole_energy
from .mnist import MnistBatch, MnistTask, load_idx_images, load_idx_labels, load_mnist
from .paint import PaintTask, render_triangles
from .sphere import SphereTask
from .waterworld import WaterWorld

__all__ = [
    "CartPoleSwingUp",
    "cartpole_energy",
    "WaterWorld",
    "MnistTask",
    "MnistBatch",
    "load_idx_images",
    "load_idx_labels",
    "load_mnist",
    "AdditionTask",
    "make_addition_batch",
    "PaintTask",
    "render_triangles",
    "SphereTask",
]
