#include <fstream>
#include <sstream>
#include <string>

#include "corefonto/chain_ingest.hpp"
#include "corefonto/error.hpp"

namespace corefonto {
namespace {

// Mirrors core/data/stoplists; tests/stoplists_test checks the two agree.
constexpr const char* kStopwords = R"LIST(# English stop words (NLTK-style). One lowercase term per line.
i
me
my
myself
we
our
ours
ourselves
you
you're
you've
you'll
you'd
your
yours
yourself
yourselves
he
him
his
himself
she
she's
her
hers
herself
it
it's
its
itself
they
them
their
theirs
themselves
what
which
who
whom
this
that
that'll
these
those
am
is
are
was
were
be
been
being
have
has
had
having
do
does
did
doing
a
an
the
and
but
if
or
because
as
until
while
of
at
by
for
with
about
against
between
into
through
during
before
after
above
below
to
from
up
down
in
out
on
off
over
under
again
further
then
once
here
there
when
where
why
how
all
any
both
each
few
more
most
other
some
such
no
nor
not
only
own
same
so
than
too
very
s
t
can
will
just
don
don't
should
should've
now
d
ll
m
o
re
ve
y
ain
aren
aren't
couldn
couldn't
didn
didn't
doesn
doesn't
hadn
hadn't
hasn
hasn't
haven
haven't
isn
isn't
ma
mightn
mightn't
mustn
mustn't
needn
needn't
shan
shan't
shouldn
shouldn't
wasn
wasn't
weren
weren't
won
won't
wouldn
wouldn't
)LIST";

constexpr const char* kPronouns = R"LIST(# Personal, demonstrative, relative and indefinite pronouns.
i
me
my
mine
myself
we
us
our
ours
ourselves
you
your
yours
yourself
yourselves
he
him
his
himself
she
her
hers
herself
it
its
itself
they
them
their
theirs
themselves
one
oneself
this
that
these
those
who
whom
whose
which
what
whatever
whoever
whichever
someone
somebody
something
anyone
anybody
anything
everyone
everybody
everything
nobody
nothing
none
another
former
latter
)LIST";

constexpr const char* kDeterminers = R"LIST(# Determiners and quantifiers stripped from the start of a phrase.
a
an
the
this
that
these
those
some
any
all
both
each
every
either
neither
no
many
much
more
most
few
fewer
several
such
other
another
certain
various
numerous
multiple
enough
half
own
same
respective
)LIST";

constexpr const char* kVerbs = R"LIST(# Verb forms; a phrase made only of verbs is discarded.
be
is
are
was
were
been
being
am
have
has
had
having
do
does
did
done
doing
show
shows
showed
shown
increase
increases
decrease
decreases
reduce
reduces
induce
induces
cause
causes
use
uses
using
include
includes
suggest
suggests
indicate
indicates
demonstrate
demonstrates
report
reports
observe
observes
find
finds
found
associate
associates
compare
compares
perform
performs
treat
treats
develop
develops
identify
identifies
involve
involves
occur
occurs
lead
leads
led
result
results
exhibit
exhibits
affect
affects
remain
remains
become
becomes
became
seem
seems
appear
appears
make
makes
made
provide
provides
)LIST";

std::set<std::string, std::less<>> parse_list(std::istream& in) {
  std::set<std::string, std::less<>> terms;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::string term = line.substr(first, last - first + 1);
    for (auto& c : term) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    terms.insert(std::move(term));
  }
  return terms;
}

std::set<std::string, std::less<>> parse_list(const char* text) {
  std::istringstream in(text);
  return parse_list(in);
}

std::set<std::string, std::less<>> load_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read stop list " + path.string());
  auto terms = parse_list(in);
  if (terms.empty()) throw DataError("stop list " + path.string() + " is empty");
  return terms;
}

}  // namespace

StopLists StopLists::defaults() {
  StopLists lists;
  lists.stopwords = parse_list(kStopwords);
  lists.pronouns = parse_list(kPronouns);
  lists.determiners_quantifiers = parse_list(kDeterminers);
  lists.verbs = parse_list(kVerbs);
  return lists;
}

StopLists StopLists::load(const std::filesystem::path& dir) {
  StopLists lists;
  lists.stopwords = load_list(dir / "stopwords.txt");
  lists.pronouns = load_list(dir / "pronouns.txt");
  lists.determiners_quantifiers = load_list(dir / "determiners.txt");
  lists.verbs = load_list(dir / "verbs.txt");
  return lists;
}

}  // namespace corefonto
