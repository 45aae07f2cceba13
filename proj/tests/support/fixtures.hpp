#pragma once

// Shared source fixtures used across the test suite.  The library/bookshelf
// pair exercises every frontend construct: lists, scanner input, a loop, a
// query with a cursor, all three write kinds, a handler and transactions.

namespace fixtures {

inline const char* kLibrarySchema = R"sql(
CREATE TABLE shelf (
  id INTEGER NOT NULL,
  numberOfBooks INTEGER NOT NULL,
  CONSTRAINT pk_shelf PRIMARY KEY (id),
  CHECK (numberOfBooks > 0)
);
CREATE TABLE book (
  code INTEGER NOT NULL,
  shelfId INTEGER NOT NULL,
  CONSTRAINT pk_book PRIMARY KEY (code),
  CONSTRAINT fk_shelf FOREIGN KEY (shelfId) REFERENCES shelf (id)
);
)sql";

inline const char* kAddBooksMethod = R"java(
List<Integer> addBooks(Connection con, Scanner in, List<Integer> newBooks) throws SQLException {
  List<Integer> addedBooks = new ArrayList<Integer>();
  int i = 0;
  while ( !(newBooks == null) & (i < newBooks.size()) ) {
    int error = 0;
    int theShelf = in.nextInt();
    ResultSet shelves = con.createStatement().executeQuery("SELECT id FROM shelf WHERE id="+theShelf);
    if ( !shelves.next() )
      con.createStatement().execute("INSERT INTO shelf VALUES ("+theShelf+",1)");
    else
      con.createStatement().execute("UPDATE shelf SET numberOfBooks = numberOfBooks+1 WHERE id="+theShelf);
    try {
      con.createStatement().execute("INSERT INTO book VALUES ("+newBooks.get(i)+","+theShelf+")");
    } catch (SQLException e) {
      error = 1;
    }
    if (error == 0) {
      con.commit();
      addedBooks.add(newBooks.get(i));
    } else
      con.rollback();
    i = i + 1;
  };
  return addedBooks;
}
)java";

// The path the worked example follows: one loop iteration, shelf found
// (else branch), book insert fails (handler taken), rollback (else branch).
inline const char* kAddBooksWorkedPathLabel = "w0e.i1f.c2y.i3f.w0x";

}  // namespace fixtures
