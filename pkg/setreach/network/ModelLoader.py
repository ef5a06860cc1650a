import json
import logging
import math

import jsonschema

from setreach.exceptions import ModelSchemaError
from setreach.interval.Activations import ACTIVATIONS
from setreach.utils.ReadFiles import read_doc, write_doc

from .Network import Layer, Network

logger = logging.getLogger(__name__)

MODEL_SCHEMA = {
    "type": "object",
    "required": ["layers"],
    "properties": {
        "layers": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["weights", "bias", "activation"],
                "properties": {
                    "weights": {
                        "type": "array",
                        "minItems": 1,
                        "items": {
                            "type": "array",
                            "minItems": 1,
                            "items": {"type": "number"},
                        },
                    },
                    "bias": {"type": "array", "items": {"type": "number"}},
                    "activation": {"enum": list(ACTIVATIONS)},
                },
            },
        },
        "meta": {"type": "object"},
    },
}


def _check_finite(document):
    for k, layer in enumerate(document["layers"]):
        values = [v for row in layer["weights"] for v in row] + list(layer["bias"])
        if not all(math.isfinite(v) for v in values):
            raise ModelSchemaError(f"layer {k} has a non-finite entry")


def load_network(document):
    """
    Build a validated Network from a model document.

    Args:
        document: The parsed model JSON (a dict), a JSON string, or a path to a
            ``.json`` file.

    Returns:
        Network: The validated network.

    Raises:
        ModelSchemaError: On schema violations, ragged weight matrices, bias/row
            mismatches, non-finite entries or layer chains that do not compose.
    """
    if isinstance(document, str) and document.lstrip().startswith("{"):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise ModelSchemaError(f"malformed model JSON: {e}") from e
    elif not isinstance(document, dict):
        document = read_doc(document)

    try:
        jsonschema.validate(document, MODEL_SCHEMA)
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path)
        raise ModelSchemaError(f"model schema violation at '{path}': {e.message}") from e
    _check_finite(document)

    layers = []
    for k, spec in enumerate(document["layers"]):
        widths = {len(row) for row in spec["weights"]}
        if len(widths) != 1:
            raise ModelSchemaError(f"layer {k} has ragged weight rows")
        layers.append(Layer(spec["weights"], spec["bias"], spec["activation"]))
    net = Network(tuple(layers))
    logger.debug(f"Loaded {net}")
    return net


def network_to_document(net, meta=None):
    document = {
        "layers": [
            {
                "weights": layer.weights.tolist(),
                "bias": layer.bias.tolist(),
                "activation": layer.activation,
            }
            for layer in net.layers
        ]
    }
    if meta:
        document["meta"] = dict(meta)
    return document


def save_network(net, path, meta=None):
    # json writes floats with repr, which round-trips doubles exactly.
    write_doc(path, network_to_document(net, meta))
    logger.info(f"Saved {net} to {path}")
