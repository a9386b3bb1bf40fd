#include "mckba/cipher.hpp"

namespace mckba {

Word encrypt_word(Word plain, Word key, bool xor_mode, unsigned n) noexcept {
    const Word m = low_mask(n);
    const Word sum = (plain + key) & m;
    return xor_mode ? (sum ^ key) & m : (sum ^ ~key) & m;
}

Word decrypt_word(Word cipher, Word key, bool xor_mode, unsigned n) noexcept {
    const Word m = low_mask(n);
    const Word unmasked = xor_mode ? (cipher ^ key) & m : (cipher ^ ~key) & m;
    return (unmasked - key) & m;
}

namespace {

Word key_for(const SecretKey& key, Selector b) noexcept { return uses_key1(b) ? key.key1 : key.key2; }

void check_selector(Selector b) {
    if (b > 3) throw InvalidInput("selector must be in {0,1,2,3}");
}

}  // namespace

Word encrypt_block(Word plain, const SecretKey& key, Selector b) {
    check_selector(b);
    return encrypt_word(plain & low_mask(key.n), key_for(key, b), is_xor_mode(b), key.n);
}

Word decrypt_block(Word cipher, const SecretKey& key, Selector b) {
    check_selector(b);
    return decrypt_word(cipher & low_mask(key.n), key_for(key, b), is_xor_mode(b), key.n);
}

namespace {

template <typename BlockOp>
BlockStream transform_blocks(const BlockStream& in, const SecretKey& key, std::span<const Selector> selectors,
                             BlockOp op) {
    key.validate();
    if (in.n != key.n) throw InvalidInput("block stream word size differs from key word size");
    if (selectors.size() < in.words.size()) throw InvalidInput("fewer selectors than blocks");
    BlockStream out = in;
    for (std::size_t k = 0; k < in.words.size(); ++k) out.words[k] = op(in.words[k], key, selectors[k]);
    return out;
}

}  // namespace

BlockStream encrypt_blocks(const BlockStream& plain, const SecretKey& key, std::span<const Selector> selectors) {
    return transform_blocks(plain, key, selectors, encrypt_block);
}

BlockStream decrypt_blocks(const BlockStream& cipher, const SecretKey& key, std::span<const Selector> selectors) {
    return transform_blocks(cipher, key, selectors, decrypt_block);
}

namespace {

// The cipher-image has the plain-image's size, so padding bits of a partial
// last word would be lost after encryption.
void require_whole_blocks(const Image& image, unsigned n) {
    if ((8 * image.width * image.height) % n != 0)
        throw InvalidInput("8*width*height must be a multiple of n for image encryption");
}

}  // namespace

Image encrypt_image(const Image& image, const SecretKey& key, const BitGenerator& generator) {
    key.validate();
    require_whole_blocks(image, key.n);
    const BlockStream plain = image_to_blocks(image, key.n);
    const SelectorSequence selectors = generator.selectors(plain.size());
    return blocks_to_image(encrypt_blocks(plain, key, selectors));
}

Image decrypt_image(const Image& image, const SecretKey& key, const BitGenerator& generator) {
    key.validate();
    require_whole_blocks(image, key.n);
    const BlockStream cipher = image_to_blocks(image, key.n);
    const SelectorSequence selectors = generator.selectors(cipher.size());
    return blocks_to_image(decrypt_blocks(cipher, key, selectors));
}

Image encrypt_image(const Image& image, const SecretKey& key) {
    key.validate();
    return encrypt_image(image, key, LogisticBitGenerator(key.x0));
}

Image decrypt_image(const Image& image, const SecretKey& key) {
    key.validate();
    return decrypt_image(image, key, LogisticBitGenerator(key.x0));
}

}  // namespace mckba
