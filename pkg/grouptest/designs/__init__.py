"""
Date: 2024-05-06 14:02:33
LastEditTime: 2024-06-03 16:40:18
Description: design kinds shared by the generators, the dump format and the CLI
FilePath: /grouptest/grouptest/designs/__init__.py
"""

BLOCK = "block"
BERNOULLI = "bernoulli"
NEAR_CONSTANT = "near_constant"
CONSTANT = "constant"

DESIGN_KINDS = (BLOCK, BERNOULLI, NEAR_CONSTANT, CONSTANT)

# the parameters each kind is built from, in dump-header order
KIND_PARAMS = {
    BLOCK: ("s", "r"),
    BERNOULLI: ("q",),
    NEAR_CONSTANT: ("L",),
    CONSTANT: ("L",),
}
