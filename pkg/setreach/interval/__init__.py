from .Activations import ACTIVATIONS, act_deriv_range, act_range, check_activation
from .Box import Box, box_ops
from .Interval import Interval, interval_combine
from .IntervalMatrix import IntervalMatrix, interval_det, interval_matmul
