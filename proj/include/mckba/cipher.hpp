#pragma once

#include <span>

#include "mckba/block_codec.hpp"
#include "mckba/keystream.hpp"

namespace mckba {

// Single-key primitives shared by the real and the equivalent key:
// (J + key) ^ key in XOR mode, (J + key) ^ ~key in XNOR mode, all mod 2^n.
Word encrypt_word(Word plain, Word key, bool xor_mode, unsigned n) noexcept;
Word decrypt_word(Word cipher, Word key, bool xor_mode, unsigned n) noexcept;

Word encrypt_block(Word plain, const SecretKey& key, Selector b);
Word decrypt_block(Word cipher, const SecretKey& key, Selector b);

BlockStream encrypt_blocks(const BlockStream& plain, const SecretKey& key, std::span<const Selector> selectors);
BlockStream decrypt_blocks(const BlockStream& cipher, const SecretKey& key, std::span<const Selector> selectors);

Image encrypt_image(const Image& image, const SecretKey& key);
Image decrypt_image(const Image& image, const SecretKey& key);
Image encrypt_image(const Image& image, const SecretKey& key, const BitGenerator& generator);
Image decrypt_image(const Image& image, const SecretKey& key, const BitGenerator& generator);

}  // namespace mckba
