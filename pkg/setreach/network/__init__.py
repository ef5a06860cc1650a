from .generate import generate_network, philox_stream
from .ModelLoader import load_network, network_to_document, save_network
from .Network import Layer, Network, forward_batch, forward_point, jacobian_batch, point_jacobian
