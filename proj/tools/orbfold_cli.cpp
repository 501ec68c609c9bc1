// Command line front end; subcommands are wired up as the library grows.
#include <CLI11.hpp>

#include <orbfold/nielsen.hpp>
#include <orbfold/presentation.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"folding calculus for 2-orbifold groups"};
    app.require_subcommand(1);

    std::string sig_text, tuple_text;
    auto* normalize = app.add_subcommand("normalize", "Nielsen normal form of a generating tuple");
    normalize->add_option("--orbifold", sig_text)->required();
    normalize->add_option("--tuple", tuple_text)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (normalize->parsed()) {
            auto sig = orbfold::parse_signature(sig_text);
            auto fp = orbfold::free_product_basis(sig, sig.boundary);
            std::vector<orbfold::Word> t;
            for (auto& w : orbfold::parse_tuple(tuple_text, fp.presentation.alphabet))
                t.push_back(fp.rewrite(w));
            auto rep = orbfold::nielsen_normal_form(t, fp.basis);
            if (!rep.generates) {
                std::cout << "non-generating\n";
                return 0;
            }
            std::cout << "trivial_count " << rep.trivial_count << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
