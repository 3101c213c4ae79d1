#include "surfacelab/word.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace surfacelab {

Word Word::parse(const std::string& text) {
    std::vector<Letter> out;
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch)) || ch == '1' || ch == '.' || ch == '*') continue;
        if (!std::isalpha(static_cast<unsigned char>(ch)))
            throw Error(std::string("bad letter '") + ch + "' in word \"" + text + "\"");
        bool inv = std::isupper(static_cast<unsigned char>(ch));
        int gen = std::tolower(static_cast<unsigned char>(ch)) - 'a';
        out.emplace_back(gen, inv ? -1 : +1);
    }
    return Word(std::move(out));
}

std::string Word::str() const {
    std::string s;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i) s += ' ';
        char c = static_cast<char>('a' + letters_[i].gen());
        s += letters_[i].sign() < 0 ? static_cast<char>(std::toupper(c)) : c;
    }
    return s;
}

Word Word::inverse() const {
    std::vector<Letter> out(letters_.rbegin(), letters_.rend());
    for (auto& l : out) l = l.inverse();
    return Word(std::move(out));
}

Word Word::power(int k) const {
    Word base = k < 0 ? inverse() : *this;
    std::vector<Letter> out;
    for (int i = 0; i < std::abs(k); ++i) out.insert(out.end(), base.begin(), base.end());
    return Word(std::move(out));
}

Word Word::rotated(std::size_t shift) const {
    if (letters_.empty()) return *this;
    std::vector<Letter> out(letters_);
    std::rotate(out.begin(), out.begin() + static_cast<long>(shift % out.size()), out.end());
    return Word(std::move(out));
}

bool Word::is_freely_reduced() const {
    for (std::size_t i = 1; i < letters_.size(); ++i)
        if (letters_[i] == letters_[i - 1].inverse()) return false;
    return true;
}

bool Word::is_cyclically_reduced() const {
    return is_freely_reduced() && (letters_.size() < 2 || letters_.front() != letters_.back().inverse());
}

Word operator*(const Word& u, const Word& v) {
    std::vector<Letter> out(u.letters_);
    out.insert(out.end(), v.letters_.begin(), v.letters_.end());
    return Word(std::move(out));
}

Presentation Presentation::surface(int genus) {
    if (genus < 1 || genus > 6) throw Error("genus out of range");
    std::vector<Letter> rel;
    for (int i = 0; i < genus; ++i) {
        Letter a(2 * i, +1), b(2 * i + 1, +1);
        rel.insert(rel.end(), {a, b, a.inverse(), b.inverse()});
    }
    return Presentation{genus, Word(std::move(rel))};
}

const Presentation& genus2() {
    static const Presentation p = Presentation::surface(2);
    return p;
}

Word reduce(const Word& w) {
    std::vector<Letter> st;
    st.reserve(w.size());
    for (Letter l : w) {
        if (!st.empty() && st.back() == l.inverse())
            st.pop_back();
        else
            st.push_back(l);
    }
    return Word(std::move(st));
}

Word cyclic_reduce(const Word& w) {
    Word r = reduce(w);
    const auto& L = r.letters();
    std::size_t i = 0, j = L.size();
    while (j - i >= 2 && L[i] == L[j - 1].inverse()) { ++i; --j; }
    return Word(std::vector<Letter>(L.begin() + static_cast<long>(i), L.begin() + static_cast<long>(j)));
}

ConjugateSplit split_conjugate(const Word& w) {
    Word r = reduce(w);
    const auto& L = r.letters();
    std::size_t i = 0, j = L.size();
    while (j - i >= 2 && L[i] == L[j - 1].inverse()) { ++i; --j; }
    return {Word(std::vector<Letter>(L.begin(), L.begin() + static_cast<long>(i))),
            Word(std::vector<Letter>(L.begin() + static_cast<long>(i), L.begin() + static_cast<long>(j)))};
}

namespace {

std::vector<std::vector<Letter>> relator_rotations(const Presentation& p) {
    std::vector<std::vector<Letter>> out;
    for (const Word& r : {p.relator, p.relator.inverse()})
        for (std::size_t s = 0; s < r.size(); ++s) out.push_back(r.rotated(s).letters());
    return out;
}

}  // namespace

Word dehn_reduce(const Word& w, const Presentation& p) {
    static thread_local Word cachedRelator;
    static thread_local std::vector<std::vector<Letter>> rots;
    if (rots.empty() || cachedRelator != p.relator) { rots = relator_rotations(p); cachedRelator = p.relator; }

    const std::size_t L = p.relator.size();
    const std::size_t need = L / 2 + 1;
    std::vector<Letter> cur = cyclic_reduce(w).letters();

    for (;;) {
        const std::size_t n = cur.size();
        if (n < need) break;
        bool replaced = false;
        for (std::size_t i = 0; i < n && !replaced; ++i) {
            for (const auto& r : rots) {
                std::size_t k = 0, cap = std::min(n, L);
                while (k < cap && cur[(i + k) % n] == r[k]) ++k;
                if (k < need) continue;
                // r = u v with u matched; u = v^-1 in the group
                std::vector<Letter> next;
                for (std::size_t m = L; m-- > k;) next.push_back(r[m].inverse());
                for (std::size_t m = k; m < n; ++m) next.push_back(cur[(i + m) % n]);
                cur = cyclic_reduce(Word(std::move(next))).letters();
                replaced = true;
                break;
            }
        }
        if (!replaced) break;
    }
    return Word(std::move(cur));
}

namespace {

// Forbidden (L/2+1)-grams packed into integers.
class GramTable {
public:
    explicit GramTable(const Presentation& p) : len_(static_cast<int>(p.relator.size() / 2 + 1)) {
        int alphabet = 2 * p.generators();
        while ((1 << bits_) < alphabet) ++bits_;
        dense_ = bits_ * len_ <= 24;
        if (dense_) table_.assign(std::size_t(1) << (bits_ * len_), false);
        for (const auto& r : relator_rotations(p)) {
            std::uint64_t key = 0;
            for (int k = 0; k < len_; ++k) key = (key << bits_) | r[static_cast<std::size_t>(k)].code;
            if (dense_) table_[key] = true; else sparse_.insert(key);
        }
    }
    int length() const { return len_; }
    // a[first..first+len) cyclically in a buffer of size n
    bool forbidden(const int* a, int n, int first) const {
        std::uint64_t key = 0;
        for (int k = 0; k < len_; ++k) key = (key << bits_) | static_cast<std::uint64_t>(a[(first + k) % n]);
        return dense_ ? static_cast<bool>(table_[key]) : sparse_.count(key) > 0;
    }

private:
    int len_;
    int bits_ = 1;
    bool dense_ = true;
    std::vector<bool> table_;
    std::unordered_set<std::uint64_t> sparse_;
};

struct NecklaceWalker {
    const GramTable& grams;
    int alphabet;
    int n = 0;
    std::vector<int> a;      // 1-indexed, a[0] = 0
    std::vector<int> body;   // scratch, 0-indexed copy for cyclic checks
    const std::function<void(const Word&)>& visit;

    void emit() {
        if (n >= 2 && a[static_cast<std::size_t>(n)] == (a[1] ^ 1)) return;
        const int g = grams.length();
        if (n >= g) {
            for (int i = 0; i < n; ++i) body[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i + 1)];
            for (int s = n - g + 1; s < n; ++s)
                if (grams.forbidden(body.data(), n, s)) return;
        }
        std::vector<Letter> letters(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) letters[static_cast<std::size_t>(i)] = Letter::from_code(a[static_cast<std::size_t>(i + 1)]);
        visit(Word(std::move(letters)));
    }

    void gen(int t, int p) {
        if (t > n) {
            if (n % p == 0) emit();
            return;
        }
        const int g = grams.length();
        for (int j = a[static_cast<std::size_t>(t - p)]; j < alphabet; ++j) {
            if (t > 1 && j == (a[static_cast<std::size_t>(t - 1)] ^ 1)) continue;
            a[static_cast<std::size_t>(t)] = j;
            if (t >= g && grams.forbidden(a.data() + 1, n, t - g)) continue;
            gen(t + 1, j == a[static_cast<std::size_t>(t - p)] ? p : t);
        }
    }
};

}  // namespace

void for_each_conjugacy_class(int maxLen, const std::function<void(const Word&)>& visit, const Presentation& p) {
    if (maxLen < 1) throw Error("maxLen must be >= 1");
    GramTable grams(p);
    NecklaceWalker walker{grams, 2 * p.generators(), 0, {}, {}, visit};
    for (int n = 1; n <= maxLen; ++n) {
        walker.n = n;
        walker.a.assign(static_cast<std::size_t>(n + 1), 0);
        walker.body.assign(static_cast<std::size_t>(n), 0);
        walker.gen(1, 1);
    }
}

std::vector<Word> enumerate_conjugacy_classes(int maxLen, const Presentation& p) {
    std::vector<Word> out;
    for_each_conjugacy_class(maxLen, [&](const Word& w) { out.push_back(w); }, p);
    return out;
}

int conjugacy_length(const Word& w, const Presentation& p) {
    Word r = dehn_reduce(cyclic_reduce(w), p);
    if (r.empty()) throw Error("trivial element");
    return static_cast<int>(r.size());
}

}  // namespace surfacelab
