#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace surfacelab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Letter code: 2*generator + (1 if inverse). Inverse flips the low bit.
struct Letter {
    std::uint8_t code = 0;

    Letter() = default;
    constexpr Letter(int gen, int sign) : code(static_cast<std::uint8_t>(2 * gen + (sign < 0 ? 1 : 0))) {}
    static constexpr Letter from_code(int c) { Letter l; l.code = static_cast<std::uint8_t>(c); return l; }

    int gen() const { return code >> 1; }
    int sign() const { return (code & 1) ? -1 : +1; }
    Letter inverse() const { return from_code(code ^ 1); }

    bool operator==(const Letter&) const = default;
    auto operator<=>(const Letter&) const = default;
};

class Word {
public:
    Word() = default;
    explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

    // "a B c D" or "aBcD"; uppercase is the inverse, "1" or "" the identity.
    static Word parse(const std::string& text);
    std::string str() const;

    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    const Letter& operator[](std::size_t i) const { return letters_[i]; }
    const std::vector<Letter>& letters() const { return letters_; }
    auto begin() const { return letters_.begin(); }
    auto end() const { return letters_.end(); }

    Word inverse() const;
    Word power(int k) const;
    Word rotated(std::size_t shift) const;
    bool is_freely_reduced() const;
    bool is_cyclically_reduced() const;

    // free-group concatenation, no reduction
    friend Word operator*(const Word& u, const Word& v);
    bool operator==(const Word&) const = default;
    auto operator<=>(const Word&) const = default;

private:
    std::vector<Letter> letters_;
};

// Surface group presentation <a1,b1,...,ag,bg | prod [ai,bi]>.
struct Presentation {
    int genus = 2;
    Word relator;

    static Presentation surface(int genus);
    int generators() const { return 2 * genus; }
};

const Presentation& genus2();

Word reduce(const Word& w);
Word cyclic_reduce(const Word& w);
Word dehn_reduce(const Word& w, const Presentation& p = genus2());

// Lyndon-style enumeration of Dehn-reduced cyclic words up to maxLen.
void for_each_conjugacy_class(int maxLen, const std::function<void(const Word&)>& visit,
                              const Presentation& p = genus2());
std::vector<Word> enumerate_conjugacy_classes(int maxLen, const Presentation& p = genus2());

// Upper bound for the conjugacy length; exact when w survives Dehn reduction.
int conjugacy_length(const Word& w, const Presentation& p = genus2());

// Splits a freely reduced w as u * core * u^-1 with core cyclically reduced.
struct ConjugateSplit {
    Word conjugator;
    Word core;
};
ConjugateSplit split_conjugate(const Word& w);

}  // namespace surfacelab
