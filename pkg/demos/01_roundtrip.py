"""Smallest possible tour: compress a string, look at the artifact, get it back."""
from chunkpair import compress, decompress

text = (b"The chunker cuts where the content says to cut, "
        b"so repeated passages land in the same blocks. ") * 50

artifact = compress(text)
blob = artifact.to_bytes()

print(f"input              {len(text)} bytes")
print(f"artifact           {len(blob)} bytes")
print(f"dictionary blocks  {artifact.block_count}")
print(f"grammar            r={artifact.encoded.rule_count} rules, "
      f"c={artifact.encoded.top_length} top symbols")
print(f"payload            {artifact.payload_bits} bits")

restored = decompress(blob)
assert restored == text
print("roundtrip          exact")
