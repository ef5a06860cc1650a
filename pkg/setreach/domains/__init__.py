from .BoxDomain import box_forward_bounds, box_propagate
from .ReachSet import Domain, ReachSet, propagate, propagate_cells
from .Zonotope import Zonotope, zono_activation, zono_affine, zono_from_box
