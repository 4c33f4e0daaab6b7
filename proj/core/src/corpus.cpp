#include "funk/corpus.hpp"

#include <sstream>

namespace funk {

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = [] {
    std::vector<CorpusEntry> v;
    auto accept = [&](std::string name, std::string type, Observation obs) {
      v.push_back(CorpusEntry{name, name + ".fk", true, std::move(type), obs,
                              std::nullopt});
    };
    auto reject = [&](std::string name, ErrorKind kind) {
      v.push_back(
          CorpusEntry{name, name + ".fk", false, "", Observation{}, kind});
    };

    // Worked examples.
    accept("fig3_twice", "int", Observation::number(5));
    reject("fig1_compose", ErrorKind::UpwardFunarg);
    reject("curried_twice_bad", ErrorKind::UpwardFunarg);
    accept("curried_twice_let", "int", Observation::number(5));
    accept("curried_twice_capture", "int", Observation::number(5));
    reject("effectpoly_bad", ErrorKind::EffectViolation);
    accept("effectpoly_ok", "int", Observation::number(12));
    accept("renaming", "int", Observation::number(3));
    accept("tailcall_lists", "int", Observation::number(0));

    // Synthesized edge cases.
    accept("zero_arg", "int", Observation::number(7));
    accept("shadowing", "int", Observation::number(3));
    accept("nested_effabs", "int", Observation::number(7));
    accept("empty_effect", "int", Observation::number(7));
    accept("lists", "int", Observation::number(3));
    accept("if_nested", "int", Observation::number(6));
    accept("upward_ok_closed", "int", Observation::number(42));
    accept("funobs", "func(int,int,[])", Observation::fun());
    accept("absobs", "<p> func(int,int,[p])", Observation::abs());
    accept("mixed_effects", "int", Observation::number(3));
    reject("reject_upward_global", ErrorKind::UpwardFunarg);
    reject("reject_unbound", ErrorKind::UnboundVar);
    reject("reject_arity", ErrorKind::Arity);
    reject("reject_overlap", ErrorKind::TailCallOverlap);
    reject("reject_notineffect", ErrorKind::NotInEffect);
    reject("reject_malformed_eff", ErrorKind::MalformedEffect);
    reject("reject_mismatch", ErrorKind::Mismatch);
    return v;
  }();
  return entries;
}

std::string tailcall_lists_source(int n) {
  std::ostringstream out;
  out << "proc s(i: int): int list {\n"
         "  if (iszero(i)) {\n"
         "    return nil;\n"
         "  } else {\n"
         "    var p = dec(i);\n"
         "    var sp = s(p);\n"
         "    return cons(0, sp);\n"
         "  }\n"
         "}\n"
         "proc f(n: int, x: int list): int [s]{\n"
         "  var z = length(x);\n"
         "  proc g(; f, n): int [s]{\n"
         "    var s100 = s("
      << n
      << ");\n"
         "    return f(dec(n), s100);\n"
         "  }\n"
         "  if (iszero(n)) return 0;\n"
         "  else return g();\n"
         "}\n"
         "var r = f("
      << n
      << ", nil);\n"
         "return r;\n";
  return out.str();
}

}  // namespace funk
