export class ModelUnavailable extends Error {
  constructor(message: string) {
    super(message);
    this.name = "ModelUnavailable";
  }
}

export class UnreadableMedia extends Error {
  constructor(message: string) {
    super(message);
    this.name = "UnreadableMedia";
  }
}

export class IoFailure extends Error {
  constructor(message: string) {
    super(message);
    this.name = "IoFailure";
  }
}
