#include "support/listings.hpp"

namespace flexitex::testing {

const std::string_view kRealsListing = R"(\begin{module}[id=reals]
  \importmodule[../background/sets]{sets}
  \symdef{Reals}{\mathcal{R}}
  \symdef{greater}[2]{#1>#2}
  \symdef{positiveReals}{\Reals^+}
  \begin{definition}[id=posreals.def,title=Positive Real Numbers]
    The set $\positiveReals$ is the set of $\inset{x}\Reals$ such that $\greater{x}0$
  \end{definition}
  \ldots
\end{module}
)";

const std::string_view kDefiniendumListing = R"(\begin{module}[id=sets-operations]
  \symdef{cart}{\times}
  \begin{definition}[id=Cartesianproduct.def,display=flow,for=cart]
    {\twindef{Cartesian}{product}:}
    $\defeq{\cart{A,B}}{\setst{\tup{a,b}}{\conj{\inset{a}{A},\inset{b}{B}}}}$, call
    $\tup{a,b}$ {\defin{pair}}.
  \end{definition}
\end{module}
)";

const std::string_view kAutocompleteListing = R"(\begin{module}[id=reals]

  \importmodule[../background/sets]{sets}
  \symdef{Reals}{\mathcal{R}}
  \symdef{positiveReals}{\Reals^+}
  \symdef{greater}[2]{#1>#2}
  \begin{definition}[id=posreals.def,title=Positive Real Numbers, for=positiveReals]
    The set $\positiveReals$ is the set of $\inset{x}\Reals$ such that $\greater{x}0$
  \end{definition}
  \ldots
\end{module}
)";

const std::string_view kFunctionDefinitionListing = R"(\begin{definition}[id=functions.def, for=fun]
  A {\defin{function}} $\fun{f}AB$ is a left-total, right-unique relation in $\cart{A,B}$
\end{definition}
)";

}  // namespace flexitex::testing
