void test(Connection con, Scanner in) throws SQLException {
  int i = 1;
  con.createStatement().execute("INSERT INTO t1 VALUES ("+i+","+i+")");
  con.createStatement().execute("INSERT INTO t1 VALUES ("+(i+1)+","+(i+1)+")");
  con.createStatement().execute("INSERT INTO t2 VALUES ("+i+","+i+")");
  con.createStatement().execute("INSERT INTO t2 VALUES ("+(i+1)+","+(i+1)+")");
  int input1 = in.nextInt();
  ResultSet result1 = con.createStatement().executeQuery("SELECT idt1 FROM t1 WHERE fieldt1="+i);
  result1.next();
  con.createStatement().execute("DELETE FROM t2 WHERE idt2="+input1);
  con.createStatement().execute("UPDATE t2 SET fieldt2 = 1+fieldt2 WHERE idt2 < "+(2+result1.getInt("idt1")));
  input1 = in.nextInt();
  con.createStatement().execute("DELETE FROM t1 WHERE idt1="+input1);
}
