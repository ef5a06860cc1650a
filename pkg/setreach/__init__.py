from .interval import Box, Interval, IntervalMatrix
from .network import Network, generate_network, load_network
from .verifier import Status, Verdict, VerificationProblem, monte_carlo, verify
