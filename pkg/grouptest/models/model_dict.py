"""
Date: 2024-05-09 17:03:10
LastEditTime: 2024-05-21 08:49:26
Description: DECODER_DICT
FilePath: /grouptest/grouptest/models/model_dict.py
"""

from grouptest.models.decoders import COMP, DD, decode_comp, decode_dd

DECODER_DICT = {
    COMP: decode_comp,
    DD: decode_dd,
}
